//! Seeded benchmark runs. One CSV row per generated instance; a summary goes
//! to stderr.

use std::fmt::Write as _;
use std::time::Instant;

use nmrf::generate::{self, seeded, Family};
use nmrf::mwss::SolveError;
use nmrf::oracle::{brute_force_map, MAX_CONFIGURATIONS};
use nmrf::structure::BlockClass;
use nmrf::submodular::construct_k3;
use nmrf::{classify_model, solve_map_with, Method, Model, SolveOptions};

use crate::{Failure, Report};

pub(crate) struct Config {
    pub family: Family,
    pub count: usize,
    pub size: usize,
    pub seed: u64,
    pub oracle_check: bool,
    pub timing: bool,
    pub eps: f64,
}

struct Tally {
    rows: usize,
    checked: usize,
    agreed: usize,
}

pub(crate) fn run(config: &Config) -> Result<Report, Failure> {
    if config.count == 0 {
        return Err(Failure::Input("--count must be positive".into()));
    }
    let mut rng = seeded(config.seed);
    let mut csv = String::new();
    let mut tally = Tally {
        rows: 0,
        checked: 0,
        agreed: 0,
    };
    match config.family {
        Family::RandomSupermodularK3 => {
            csv.push_str("instance,alpha,branch,max_error,min_weight,agree");
            if config.timing {
                csv.push_str(",construct_us");
            }
            csv.push('\n');
            for i in 0..config.count {
                let psi = generate::random_supermodular_k3(&mut rng);
                let start = Instant::now();
                let rep = construct_k3(&psi, config.eps).map_err(|e| Failure::Input(e.to_string()))?;
                let elapsed = start.elapsed();
                let max_error = (0..8)
                    .map(|x| (rep.evaluate(&[x >> 2 & 1, x >> 1 & 1, x & 1]) - psi.table()[x]).abs())
                    .fold(0.0, f64::max);
                let min_weight = rep.min_higher_weight().unwrap_or(0.0);
                let agree = max_error <= 1e-9 && min_weight >= 0.0;
                tally.checked += 1;
                tally.agreed += usize::from(agree);
                let _ = write!(
                    csv,
                    "{i},{},{},{max_error:e},{min_weight},{agree}",
                    psi.alpha(),
                    rep.branch.as_str()
                );
                if config.timing {
                    let _ = write!(csv, ",{:.3}", elapsed.as_secs_f64() * 1e6);
                }
                csv.push('\n');
                tally.rows += 1;
            }
        }
        family => {
            if config.size == 0 {
                return Err(Failure::Input("--size must be positive".into()));
            }
            csv.push_str("instance,variables,edges,tractable,blocks,method,objective,oracle_objective,agree");
            if config.timing {
                csv.push_str(",classify_us,solve_us");
            }
            csv.push('\n');
            for i in 0..config.count {
                let model = match family {
                    Family::RandomTractable => generate::random_tractable(&mut rng, config.size, true),
                    Family::RandomSigned => generate::random_signed(&mut rng, config.size, 0.5, true),
                    Family::BlockChain(edges) => generate::block_chain(&mut rng, edges),
                    Family::RandomSupermodularK3 => unreachable!(),
                };
                model_row(config, i, &model, &mut csv, &mut tally)?;
                tally.rows += 1;
            }
        }
    }
    eprintln!(
        "{} instances of {}; oracle agreement {}/{}",
        tally.rows, config.family, tally.agreed, tally.checked
    );
    Ok(Report {
        body: csv,
        positive: tally.agreed == tally.checked,
    })
}

fn model_row(config: &Config, i: usize, model: &Model<f64>, csv: &mut String, tally: &mut Tally) -> Result<(), Failure> {
    let start = Instant::now();
    let report = classify_model(model, config.eps).map_err(|e| Failure::Input(e.to_string()))?;
    let classify_time = start.elapsed();
    let mut counts = [0usize; 4];
    for b in report.blocks.iter().filter(|b| !b.edges.is_empty()) {
        counts[match b.class {
            BlockClass::Br { .. } => 0,
            BlockClass::Tmn { .. } => 1,
            BlockClass::Un { .. } => 2,
            BlockClass::Intractable { .. } => 3,
        }] += 1;
    }
    let blocks = format!("B_R:{} T:{} U:{} intractable:{}", counts[0], counts[1], counts[2], counts[3]);

    let mut opts = SolveOptions::new(if report.tractable { Method::Auto } else { Method::Bnb });
    opts.eps = config.eps;
    let start = Instant::now();
    let solved = solve_map_with(model, &opts);
    let solve_time = start.elapsed();
    let (method, objective) = match &solved {
        Ok(s) => (s.method.clone(), Some(s.objective)),
        Err(SolveError::TooLarge { .. }) => ("too-large".to_string(), None),
        Err(e) => return Err(Failure::Input(e.to_string())),
    };

    let (mut oracle, mut agree) = (String::new(), String::new());
    if config.oracle_check && model.configuration_count() <= MAX_CONFIGURATIONS {
        let want = brute_force_map(model).map_err(|e| Failure::Cap(e.to_string()))?;
        oracle = want.objective.to_string();
        if let Some(got) = objective {
            let ok = (got - want.objective).abs() <= 1e-6 * (1.0 + want.objective.abs());
            tally.checked += 1;
            tally.agreed += usize::from(ok);
            agree = ok.to_string();
        }
    }
    let _ = write!(
        csv,
        "{i},{},{},{},{blocks},{method},{},{oracle},{agree}",
        model.num_variables(),
        model.pairwise_tables().len(),
        report.tractable,
        objective.map(|o| o.to_string()).unwrap_or_default(),
    );
    if config.timing {
        let _ = write!(
            csv,
            ",{:.3},{:.3}",
            classify_time.as_secs_f64() * 1e6,
            solve_time.as_secs_f64() * 1e6
        );
    }
    csv.push('\n');
    Ok(())
}
