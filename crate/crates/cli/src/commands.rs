use std::fs;
use std::time::Instant;

use mfseries::freeprob::{
    cumulants_from_moments, moments_from_cumulants, s_transform, t_transform, MomentPath,
};
use mfseries::freeprod::{product_moment_triple, verify_twisted as verify_pair, VerificationReport};
use mfseries::io::{SeriesFile, SeriesKind};
use mfseries::ncoracle::product_moments;
use mfseries::random::random_cumulants;
use mfseries::{AlgebraContext, Error, MultiSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{OracleArgs, TransformArgs, VerifyArgs};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn math(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn check_tol(tol: f64) -> Outcome {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Failure::usage(format!("tolerance must be a nonnegative number, got {tol}")))
    }
}

fn check_scale(scale: f64) -> Outcome {
    if scale.is_finite() && scale > 0.0 {
        Ok(())
    } else {
        Err(Failure::usage(format!("scale must be positive, got {scale}")))
    }
}

/// One line of a verification campaign.
#[derive(Serialize)]
pub struct TrialReport {
    pub trial: u64,
    pub seed: u64,
    #[serde(flatten)]
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

fn run_trial(args: &VerifyArgs, trial: u64) -> Result<(TrialReport, f64), Error> {
    let start = Instant::now();
    let seed = args.seed.wrapping_add(trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = AlgebraContext::with_tol(args.dim as usize, args.tol);
    let order = args.order as usize;
    let c_x = random_cumulants(ctx, order, args.scale, &mut rng)?;
    let c_y = random_cumulants(ctx, order, args.scale, &mut rng)?;
    let report = verify_pair(&c_x, &c_y, args.tol)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok((
        TrialReport {
            trial,
            seed,
            report,
            wall_time_ms: args.timing.then_some(elapsed),
        },
        elapsed,
    ))
}

fn fmt_devs(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.2e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verify_twisted(args: &VerifyArgs) -> Outcome {
    check_tol(args.tol)?;
    check_scale(args.scale)?;
    let results: Vec<_> = (0..args.trials)
        .into_par_iter()
        .map(|t| (t, run_trial(args, t)))
        .collect();

    let mut failed = 0u64;
    for (trial, result) in &results {
        match result {
            Ok((line, elapsed)) => {
                if !line.report.pass {
                    failed += 1;
                }
                if args.json {
                    println!("{}", serde_json::to_string(line).expect("report serializes"));
                } else {
                    let r = &line.report;
                    println!(
                        "trial {} seed {} d={} N={} {} max {:.3e} ({:.1} ms)",
                        line.trial,
                        line.seed,
                        r.dim,
                        r.order,
                        if r.pass { "PASS" } else { "FAIL" },
                        r.max_deviation,
                        elapsed
                    );
                    println!("  theorem  {}", fmt_devs(&r.theorem));
                    println!("  psi2     {}", fmt_devs(&r.psi2));
                    println!("  ipsi     {}", fmt_devs(&r.ipsi));
                    println!("  phichi   {}", fmt_devs(&r.phichi));
                    println!("  lemma_x  {}", fmt_devs(&r.lemma_x));
                    println!("  lemma_y  {}", fmt_devs(&r.lemma_y));
                }
            }
            Err(e) => {
                failed += 1;
                eprintln!("trial {trial}: {e}");
            }
        }
    }
    if !args.json {
        println!(
            "{} of {} trials passed at tol {:e}",
            args.trials - failed,
            args.trials,
            args.tol
        );
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::math(format!("{failed} trial(s) failed")))
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Transform {
    MomentsToCumulants,
    CumulantsToMoments,
    S,
    T,
}

impl Transform {
    fn expects(self) -> SeriesKind {
        match self {
            Transform::CumulantsToMoments => SeriesKind::Cumulants,
            _ => SeriesKind::Moments,
        }
    }

    fn produces(self) -> SeriesKind {
        match self {
            Transform::MomentsToCumulants => SeriesKind::Cumulants,
            Transform::CumulantsToMoments => SeriesKind::Moments,
            Transform::S => SeriesKind::STransform,
            Transform::T => SeriesKind::Generic,
        }
    }
}

fn math_failure(e: Error) -> Failure {
    match e {
        Error::LinearTermSingular { .. } | Error::NotInvertible { .. } => Failure::math(format!(
            "E[x] not invertible: the constant term of the moment series is singular ({e})"
        )),
        other => Failure::math(other.to_string()),
    }
}

pub fn transform(args: &TransformArgs, which: Transform) -> Outcome {
    check_tol(args.tol)?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.input.display())))?;
    let file = SeriesFile::parse(&text).map_err(|e| Failure::usage(e.to_string()))?;
    if file.kind != which.expects() && file.kind != SeriesKind::Generic {
        return Err(Failure::usage(format!(
            "expected a {} file, found kind {}",
            which.expects().as_str(),
            file.kind.as_str()
        )));
    }
    let series = file
        .to_series(args.tol)
        .map_err(|e| Failure::usage(e.to_string()))?;
    if matches!(which, Transform::S | Transform::T) && series.order() == 0 {
        return Err(Failure::usage("the S- and T-transforms need order at least 1"));
    }
    let result: MultiSeries = match which {
        Transform::MomentsToCumulants => cumulants_from_moments(&series),
        Transform::CumulantsToMoments => moments_from_cumulants(&series, MomentPath::C1),
        Transform::S => s_transform(&series),
        Transform::T => t_transform(&series),
    }
    .map_err(math_failure)?;
    let out = SeriesFile::from_series(&result, which.produces());
    fs::write(&args.output, out.to_json() + "\n")
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", args.output.display())))?;
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    dim: u32,
    order: u32,
    seed: u64,
    tolerance: f64,
    max_oracle_degree: u32,
    deviations: Vec<f64>,
    pass: bool,
}

pub fn oracle_compare(args: &OracleArgs) -> Outcome {
    check_tol(args.tol)?;
    check_scale(args.scale)?;
    if args.max_oracle_degree > args.order {
        return Err(Failure::usage(format!(
            "--max-oracle-degree {} exceeds --order {}",
            args.max_oracle_degree, args.order
        )));
    }
    let ctx = AlgebraContext::new(args.dim as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let order = args.order as usize;
    let mut run = || -> Result<Vec<f64>, Error> {
        let c_x = random_cumulants(ctx, order, args.scale, &mut rng)?;
        let c_y = random_cumulants(ctx, order, args.scale, &mut rng)?;
        let triple = product_moment_triple(&c_x, &c_y)?;
        (0..=args.max_oracle_degree as usize)
            .into_par_iter()
            .map(|n| {
                let oracle = product_moments(&c_x, &c_y, n)?;
                Ok(oracle.max_deviation(triple.phi.component(n))?.0)
            })
            .collect()
    };
    let deviations = run().map_err(math_failure)?;
    let pass = deviations.iter().all(|&d| d <= args.tol);
    let report = OracleReport {
        dim: args.dim,
        order: args.order,
        seed: args.seed,
        tolerance: args.tol,
        max_oracle_degree: args.max_oracle_degree,
        deviations,
        pass,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        for (n, d) in report.deviations.iter().enumerate() {
            println!(
                "degree {n}: deviation {d:.3e} {}",
                if *d <= args.tol { "ok" } else { "MISMATCH" }
            );
        }
        println!(
            "oracle comparison {} at tol {:e}",
            if pass { "PASS" } else { "FAIL" },
            args.tol
        );
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::math("recursion and partition oracle disagree"))
    }
}
