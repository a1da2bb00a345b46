use criterion::{black_box, criterion_group, criterion_main, Criterion};
use toric_hld::mlp::Network;
use toric_hld::noise::rng_stream;

fn training_step(c: &mut Criterion) {
    let mut rng = rng_stream(3, 0);
    let net = Network::<f32>::random(&[18, 500, 250, 16], 0.01, &mut rng).unwrap();
    let x: Vec<f32> = (0..1000 * 18).map(|i| (i % 3 == 0) as u8 as f32).collect();
    let y: Vec<u8> = (0..1000).map(|i| (i % 16) as u8).collect();
    c.bench_function("loss_and_gradient 18-500-250-16 batch 1000", |b| {
        b.iter(|| net.loss_and_gradient(black_box(&x), black_box(&y), 0.0).unwrap().0)
    });
    c.bench_function("predict_batch 18-500-250-16 batch 1000", |b| {
        b.iter(|| net.predict_batch(black_box(&x), 1000).unwrap().len())
    });
}

criterion_group!(benches, training_step);
criterion_main!(benches);
