use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::render::syndrome_grid;
use crate::{BenchArgs, EvalArgs, GenDataArgs, ReproArgs, ReproCase, TrainArgs};
use serde::Serialize;
use serde_json::json;
use std::path::Path;
use std::time::Instant;
use toric_hld::eval::{bench as bench_op, default_p_list, loglog_slope, pseudo_threshold, sweep, write_bench, write_records, BenchOp};
use toric_hld::hld::{generate_dataset, HldConfig, ModelFile, MODEL_FORMAT_VERSION};
use toric_hld::mlp::{gradient_check, train_with, TrainConfig};
use toric_hld::oracle::check_matching;
use toric_hld::witness::{find_naive_align_witness, find_translation_witness};
use toric_hld::{CodeGeometry, Dataset, Decoder, Error, HighLevelDecoder, SymmetryMode, Underlying, WrappedDecoder};

fn create_file(path: &Path) -> CliResult<std::fs::File> {
    Ok(std::fs::File::create(path)?)
}

fn check_p(p: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("noise parameter {p} is outside [0, 1]")))
    }
}

pub fn gen_data(args: GenDataArgs, jobs: usize) -> CliResult<()> {
    check_p(args.p)?;
    if args.l < 2 {
        return Err(CliError::Usage("L must be at least 2".into()));
    }
    let cfg = HldConfig {
        l: args.l,
        underlying: args.underlying.into(),
        symmetry: args.symmetry.into(),
        p_train: args.p,
        n_samples: args.n,
        seed: args.seed,
    };
    let start = Instant::now();
    let dataset = generate_dataset(&cfg)?;
    dataset.save(&args.out)?;
    let mut manifest = RunManifest::new("gen-data", json!({ "dataset": cfg, "jobs": jobs }), vec![args.seed]);
    manifest.outputs.push(args.out.clone());
    let manifest_path = manifest.write_beside(&args.out)?;
    println!("wrote {} samples to {} in {:.1?}", dataset.samples.len(), args.out.display(), start.elapsed());
    println!("label histogram:");
    for (label, count) in dataset.label_histogram().iter().enumerate() {
        if *count > 0 {
            println!("  {label:>2}  {count}");
        }
    }
    println!("manifest: {}", manifest_path.display());
    Ok(())
}

pub fn train(args: TrainArgs) -> CliResult<()> {
    let dataset = Dataset::load(&args.data)?;
    let cfg = TrainConfig {
        hidden_layers: args.layers.clone(),
        n_it: args.iters,
        eta: args.lr,
        batch_size: args.batch,
        lambda: args.weight_decay,
        init_width: args.init_width,
        seed: args.seed,
        validation_fraction: args.val_fraction,
        validation_interval: args.val_interval,
    };
    let data = dataset.to_labeled_data();
    let start = Instant::now();
    let (network, curves) = train_with(&data, &cfg, |pt| {
        let val = pt.validation_loss.map_or("-".to_string(), |v| format!("{v:.5}"));
        let err = pt.validation_error.map_or("-".to_string(), |v| format!("{v:.5}"));
        eprintln!("it {:>7}  train {:.5}  val {val}  val-err {err}  {:.0?}", pt.iteration, pt.train_loss, start.elapsed());
    })?;
    let header = dataset.header;
    let model = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        l: header.l,
        underlying: header.underlying,
        symmetry: header.symmetry,
        p_train: header.p_train,
        dataset_seed: header.seed,
        train_config: cfg.clone(),
        network,
    };
    model.save(&args.out_model)?;
    curves.save_csv(&args.out_curves)?;
    let mut manifest = RunManifest::new("train", json!({ "train": cfg, "dataset_header": {
        "L": header.l, "p_train": header.p_train, "underlying": header.underlying,
        "symmetry": header.symmetry, "seed": header.seed, "count": header.count,
    }}), vec![args.seed, header.seed]);
    manifest.inputs.push(args.data.clone());
    manifest.outputs.push(args.out_model.clone());
    manifest.outputs.push(args.out_curves.clone());
    let manifest_path = manifest.write_beside(&args.out_model)?;
    println!("model: {}", args.out_model.display());
    println!("curves: {} ({} points)", args.out_curves.display(), curves.points.len());
    println!("manifest: {}", manifest_path.display());
    Ok(())
}

fn mismatch<T: PartialEq + std::fmt::Display>(what: &str, flag: Option<T>, model: T) -> CliResult<T> {
    match flag {
        Some(v) if v != model => Err(Error::ConfigMismatch(format!("--{what} {v} does not match the model's {model}")).into()),
        _ => Ok(model),
    }
}

pub fn eval(args: EvalArgs, jobs: usize) -> CliResult<()> {
    let p_list = args.p_list.clone().unwrap_or_else(default_p_list);
    for &p in &p_list {
        check_p(p)?;
    }
    if args.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let underlying_flag = args.underlying.map(Underlying::from);
    let symmetry_flag = args.symmetry.map(SymmetryMode::from);
    let variant: Box<dyn Decoder>;
    let g;
    match &args.model {
        Some(path) => {
            let model = ModelFile::load(path)?;
            let l = mismatch("L", args.l, model.l)?;
            mismatch("underlying", underlying_flag, model.underlying)?;
            mismatch("symmetry", symmetry_flag, model.symmetry)?;
            g = CodeGeometry::new(l)?;
            variant = Box::new(HighLevelDecoder::from_model(&g, &model)?);
        }
        None => {
            let l = args.l.ok_or_else(|| CliError::Usage("--L is required without --model".into()))?;
            g = CodeGeometry::new(l).map_err(|e| CliError::Usage(e.to_string()))?;
            variant = Box::new(WrappedDecoder {
                underlying: underlying_flag.unwrap_or(Underlying::Mwpm),
                symmetry: symmetry_flag.unwrap_or(SymmetryMode::None),
            });
        }
    }
    let reference = WrappedDecoder { underlying: Underlying::Mwpm, symmetry: SymmetryMode::None };
    let start = Instant::now();
    let records = sweep(&g, &[variant.as_ref()], &reference, &p_list, args.n, args.seed)?;
    write_records(&records, create_file(&args.out)?)?;
    let mut manifest = RunManifest::new(
        "eval",
        json!({
            "variant": variant.name(), "reference": reference.name(), "L": g.l(), "p_list": p_list,
            "n": args.n, "jobs": jobs, "common_random_numbers": true,
        }),
        vec![args.seed],
    );
    manifest.inputs.extend(args.model.clone());
    manifest.outputs.push(args.out.clone());
    let manifest_path = manifest.write_beside(&args.out)?;
    println!("{:<8} {:>10} {:>10} {:>8} {:>18}", "p", "rate", "ref rate", "ratio", "95% CI");
    for r in &records {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        println!(
            "{:<8} {:>10.6} {:>10.6} {:>8} {:>18}",
            r.p,
            r.rate,
            r.ref_k as f64 / r.ref_n as f64,
            fmt(r.ratio),
            format!("[{}, {}]", fmt(r.ci_lo), fmt(r.ci_hi))
        );
    }
    if p_list.len() >= 2 {
        let points: Vec<(f64, f64)> = records.iter().map(|r| (r.p, r.rate)).collect();
        match pseudo_threshold(&points) {
            Some(t) => println!("pseudo-threshold ≈ {:.4} (between {} and {})", t.p, t.below, t.above),
            None => println!("pseudo-threshold: no crossing in range"),
        }
    }
    println!("{} in {:.1?}; results: {}; manifest: {}", variant.name(), start.elapsed(), args.out.display(), manifest_path.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct ReproReport {
    case: &'static str,
    passed: bool,
    details: serde_json::Value,
}

fn need_seed(args: &ReproArgs) -> CliResult<u64> {
    args.seed.ok_or_else(|| CliError::Usage("--seed is required for this case".into()))
}

pub fn repro(args: ReproArgs) -> CliResult<()> {
    let report = match args.case {
        ReproCase::Fig3 => {
            let g = CodeGeometry::new(2)?;
            match find_translation_witness()? {
                Some(w) => {
                    println!("syndrome A (vertices | plaquettes):\n{}", syndrome_grid(&g, &w.first));
                    println!("syndrome B = A shifted by {:?}:\n{}", w.shift, syndrome_grid(&g, &w.second));
                    println!("plain MWPM: shifted recovery of A times recovery of B has logical class {}", w.plain_difference.value());
                    println!("centered MWPM: recovery of B is exactly the shifted recovery of A");
                    ReproReport {
                        case: "fig3",
                        passed: true,
                        details: json!({
                            "first": format!("{:?}", w.first.bits()), "second": format!("{:?}", w.second.bits()),
                            "shift": w.shift, "plain_difference_class": w.plain_difference.value(),
                        }),
                    }
                }
                None => ReproReport { case: "fig3", passed: false, details: json!("no witness found") },
            }
        }
        ReproCase::Fig4 => {
            let seed = need_seed(&args)?;
            let g = CodeGeometry::new(3)?;
            match find_naive_align_witness(seed, 100_000, 0.1)? {
                Some(w) => {
                    println!("syndrome A:\n{}", syndrome_grid(&g, &w.first));
                    println!("syndrome B = A shifted by {:?}:\n{}", w.shift, syndrome_grid(&g, &w.second));
                    println!("naive(A):\n{}", syndrome_grid(&g, &w.naive_first));
                    println!("naive(B):\n{}", syndrome_grid(&g, &w.naive_second));
                    println!("align(A) = align(B):\n{}", syndrome_grid(&g, &w.aligned));
                    ReproReport {
                        case: "fig4",
                        passed: true,
                        details: json!({
                            "first": format!("{:?}", w.first.bits()), "second": format!("{:?}", w.second.bits()),
                            "shift": w.shift, "naive_first": format!("{:?}", w.naive_first.bits()),
                            "naive_second": format!("{:?}", w.naive_second.bits()), "aligned": format!("{:?}", w.aligned.bits()),
                        }),
                    }
                }
                None => ReproReport { case: "fig4", passed: false, details: json!("no witness found") },
            }
        }
        ReproCase::GradCheck => {
            let seed = need_seed(&args)?;
            let check = gradient_check(&[6, 5, 4, 16], 100, 1e-5, seed)?;
            println!("max relative error over {} coordinates: {:.3e}", check.coordinates, check.max_relative_error);
            ReproReport {
                case: "grad-check",
                passed: check.max_relative_error < 1e-4,
                details: json!({ "coordinates": check.coordinates, "max_relative_error": check.max_relative_error }),
            }
        }
        ReproCase::MatchingOracle => {
            let seed = need_seed(&args)?;
            let g = CodeGeometry::new(5)?;
            let r = check_matching(&g, 1000, 10, seed)?;
            println!("{} comparisons against brute force, {} mismatches", r.trials, r.failures);
            ReproReport {
                case: "matching-oracle",
                passed: r.failures == 0,
                details: json!({ "trials": r.trials, "failures": r.failures }),
            }
        }
    };
    if let Some(out) = &args.out {
        std::fs::write(out, serde_json::to_string_pretty(&report).expect("report serializes") + "\n")?;
        let mut manifest = RunManifest::new("repro", json!({ "case": report.case }), args.seed.into_iter().collect());
        manifest.outputs.push(out.clone());
        manifest.write_beside(out)?;
    }
    if report.passed {
        println!("{}: PASS", report.case);
        Ok(())
    } else {
        Err(CliError::ReproFailed(format!("{}: FAIL", report.case)))
    }
}

pub fn bench(args: BenchArgs) -> CliResult<()> {
    check_p(args.p)?;
    if args.l_list.is_empty() || !args.l_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::Usage("--L-list must be nonempty and strictly ascending".into()));
    }
    if args.l_list[0] < 2 {
        return Err(CliError::Usage("lattice sizes must be at least 2".into()));
    }
    if args.n == 0 || args.n_mwpm == 0 {
        return Err(CliError::Usage("sample counts must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for op in BenchOp::ALL {
        let n = if op == BenchOp::Mwpm { args.n_mwpm } else { args.n };
        let op_rows = bench_op(op, &args.l_list, args.p, n, args.seed)?;
        if args.l_list.len() >= 3 {
            slopes.push((op, loglog_slope(&op_rows).expect("three sizes")));
        }
        rows.extend(op_rows);
    }
    match &args.out {
        Some(out) => {
            write_bench(&rows, create_file(out)?)?;
            let mut manifest = RunManifest::new(
                "bench",
                json!({ "L_list": args.l_list, "p": args.p, "n": args.n, "n_mwpm": args.n_mwpm }),
                vec![args.seed],
            );
            manifest.outputs.push(out.clone());
            manifest.write_beside(out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
        None => write_bench(&rows, std::io::stdout().lock())?,
    }
    for (op, slope) in slopes {
        eprintln!("{op:<8} log-log slope {slope:.3}");
    }
    Ok(())
}
