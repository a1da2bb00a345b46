use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use toric_hld::symmetry::{align, center};
use toric_hld::{mwpm_decode, trivial_decode};
use toric_hld_bench::sample_syndromes;

fn canonicalization(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonicalization");
    for l in [5, 10, 20, 40] {
        let (g, syndromes) = sample_syndromes(l, 0.1, 256, 1);
        group.bench_with_input(BenchmarkId::new("center", l), &syndromes, |b, ss| {
            b.iter(|| ss.iter().map(|s| center(&g, black_box(s)).unwrap().1.dr).sum::<usize>())
        });
        group.bench_with_input(BenchmarkId::new("align", l), &syndromes, |b, ss| {
            b.iter(|| ss.iter().map(|s| align(&g, black_box(s)).unwrap().1.dr).sum::<usize>())
        });
    }
    group.finish();
}

fn underlying(c: &mut Criterion) {
    let mut group = c.benchmark_group("underlying");
    for l in [5, 10, 20] {
        let (g, syndromes) = sample_syndromes(l, 0.1, 64, 2);
        group.bench_with_input(BenchmarkId::new("trivial", l), &syndromes, |b, ss| {
            b.iter(|| ss.iter().map(|s| trivial_decode(&g, black_box(s)).unwrap().weight()).sum::<usize>())
        });
        group.bench_with_input(BenchmarkId::new("mwpm", l), &syndromes, |b, ss| {
            b.iter(|| ss.iter().map(|s| mwpm_decode(&g, black_box(s)).unwrap().weight()).sum::<usize>())
        });
    }
    group.finish();
}

criterion_group!(benches, canonicalization, underlying);
criterion_main!(benches);
