//! One function per subcommand; each merges flags over the config file,
//! calls the library and writes its files.

use crate::args::*;
use crate::error::{input, CliError, CliResult};
use crate::io::{out_dir, read_table, read_xy, write_file};
use shrinkage::density::{iqr_calibrate, log_spaced, DensityCurve};
use shrinkage::diagnostics::diagnose_columns;
use shrinkage::experiments::predict::{full_data_tstats, write_agreement_csv};
use shrinkage::experiments::*;

use shrinkage::gibbs::{run_chain, Dataset, McmcConfig};
use shrinkage::priors::{DlParams, HsParams, PriorRecipe, PriorSpec, R2d2Params, SigmaPrior};
use shrinkage::rngdist::RngStream;
use shrinkage::specialfns::EvalOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

const DEFAULT_SEED: u64 = 1;

fn reject_unused(args: &PriorArgs, kind: PriorKind) -> CliResult<()> {
    let stray = match kind {
        PriorKind::R2d2 => [("a-d", args.a_d.is_some()), ("tau", args.tau.is_some()), ("global", args.global.is_some())]
            .into_iter()
            .find(|s| s.1),
        PriorKind::Dl => [("a", args.a.is_some()), ("b", args.b.is_some()), ("a-pi", args.a_pi.is_some()), ("tau", args.tau.is_some())]
            .into_iter()
            .find(|s| s.1),
        PriorKind::Hs | PriorKind::HsPlus => [("a", args.a.is_some()), ("b", args.b.is_some()), ("a-pi", args.a_pi.is_some()), ("a-d", args.a_d.is_some())]
            .into_iter()
            .find(|s| s.1),
    };
    match stray {
        Some((flag, _)) => Err(input(format!("--{flag} does not apply to the chosen prior"))),
        None => Ok(()),
    }
}

fn hs_params(args: &PriorArgs) -> CliResult<HsParams> {
    let tau = args.tau.unwrap_or(1.0);
    Ok(match args.global {
        Some(GlobalKind::Fixed) => HsParams::fixed(tau)?,
        _ => HsParams::new(tau)?,
    })
}

/// Prior for a regression with `p` columns and `n` rows. R2-D2 defaults to
/// `b = 1/2`, `a_pi = 1/n` (so `a = p/n`); DL to `a_D = 1/p`; the Horseshoe
/// variants to a half-Cauchy global scale with `tau = 1`.
pub fn regression_prior(args: &PriorArgs, p: usize, n: usize) -> CliResult<PriorSpec> {
    let kind = args.prior.unwrap_or(PriorKind::R2d2);
    reject_unused(args, kind)?;
    Ok(match kind {
        PriorKind::R2d2 => {
            let a_pi = match (args.a, args.a_pi) {
                (_, Some(a_pi)) => a_pi,
                (Some(a), None) => a / p as f64,
                (None, None) => 1.0 / n as f64,
            };
            let r = R2d2Params::reduced(p, args.b.unwrap_or(0.5), a_pi)?;
            if let Some(a) = args.a {
                if !(R2d2Params { a, ..r }).is_reduced(p) {
                    return Err(input(format!("--a {a} must equal p * a_pi = {}", r.a)));
                }
            }
            PriorSpec::R2d2(r)
        }
        PriorKind::Dl => PriorSpec::Dl(DlParams::new(args.a_d.unwrap_or(1.0 / p as f64))?),
        PriorKind::Hs => PriorSpec::Hs(hs_params(args)?),
        PriorKind::HsPlus => PriorSpec::HsPlus(hs_params(args)?),
    })
}

fn mcmc_config(args: &McmcArgs, iters: usize, burnin: usize) -> CliResult<McmcConfig> {
    let mut m = McmcConfig::new(
        args.iters.unwrap_or(iters),
        args.burnin.unwrap_or(burnin),
        args.thin.unwrap_or(1),
    )?;
    let d = SigmaPrior::default();
    m.sigma_prior = SigmaPrior::new(args.a1.unwrap_or(d.a1), args.b1.unwrap_or(d.b1))?;
    Ok(m)
}

fn required<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| input(format!("--{flag} is required")))
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fit(prior: PriorArgs, mcmc: McmcArgs, io: IoArgs, config: Option<PathBuf>) -> CliResult<()> {
    let file = ConfigFile::load(config.as_deref())?;
    let (prior, mcmc, io) = (prior.or(file.group()?), mcmc.or(file.group()?), io.or(file.group()?));
    let (x, y) = read_xy(&required(io.in_x.clone(), "in-x")?, &required(io.in_y, "in-y")?)?;
    let names = read_table(&io.in_x.unwrap())?.header;
    let data = Dataset::standardize(x, y)?;
    let spec = regression_prior(&prior, data.p(), data.n())?;
    let cfg = mcmc_config(&mcmc, 2_000, 1_000)?;
    let mut rng = RngStream::new(mcmc.seed.unwrap_or(DEFAULT_SEED), 0);
    let draws = run_chain(&spec, &data, &cfg, &mut rng)?;

    let dir = out_dir(&io.out.unwrap_or_else(|| PathBuf::from("fit_out")))?;
    write_file(&dir, "draws.csv", |w| Ok(draws.write_csv(w)?))?;
    write_file(&dir, "meta.json", |w| Ok(draws.write_metadata(w)?))?;
    let summary = draws.summary();
    let raw = data.to_raw_scale(&draws.posterior_mean());
    let name = |j: usize| match &names {
        Some(h) => h[j].clone(),
        None => format!("beta_{}", j + 1),
    };
    let path = write_file(&dir, "summary.csv", |w| {
        writeln!(w, "coefficient,mean,sd,t,q025,q975,raw_scale_mean")?;
        for (j, s) in summary.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                csv_field(&name(j)),
                sci(s.mean),
                sci(s.sd),
                sci(s.t),
                sci(s.q025),
                sci(s.q975),
                sci(raw[j])
            )?;
        }
        Ok(())
    })?;
    println!("{} on n = {}, p = {}", spec.label(), data.n(), data.p());
    println!("{:<16} {:>11} {:>11} {:>9} {:>11} {:>11}", "coefficient", "mean", "sd", "t", "2.5%", "97.5%");
    for (j, s) in summary.iter().enumerate() {
        println!(
            "{:<16} {:>11.4} {:>11.4} {:>9.3} {:>11.4} {:>11.4}",
            name(j),
            s.mean,
            s.sd,
            s.t,
            s.q025,
            s.q975
        );
    }
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn single_or(prior: &PriorArgs, p: usize, n: usize, default: Vec<PriorRecipe>) -> CliResult<Vec<PriorRecipe>> {
    if prior.prior.is_none() {
        if prior.a.or(prior.b).or(prior.a_pi).or(prior.a_d).or(prior.tau).is_some() {
            return Err(input("hyperparameter flags need --prior"));
        }
        return Ok(default);
    }
    Ok(vec![PriorRecipe::Fixed {
        spec: regression_prior(prior, p, n)?,
    }])
}

pub fn simulate(sim: SimArgs, prior: PriorArgs, mcmc: McmcArgs, out: Option<PathBuf>, config: Option<PathBuf>) -> CliResult<()> {
    let file = ConfigFile::load(config.as_deref())?;
    let (sim, prior, mcmc) = (sim.or(file.group()?), prior.or(file.group()?), mcmc.or(file.group()?));
    let setup = match sim.setup.unwrap_or(1) {
        1 => Setup::Setup1,
        2 => Setup::Setup2,
        s => return Err(input(format!("setup must be 1 or 2, got {s}"))),
    };
    let (n, p) = (sim.n.unwrap_or(60), sim.p.unwrap_or(50));
    let mut cfg = SimulationConfig::desk(setup, n, p, sim.rho.unwrap_or(0.5), mcmc.seed.unwrap_or(DEFAULT_SEED));
    cfg.replications = sim.reps.unwrap_or(cfg.replications);
    cfg.mcmc = mcmc_config(&mcmc, cfg.mcmc.iterations, cfg.mcmc.burn_in)?;
    cfg.priors = single_or(&prior, p, n, PriorRecipe::simulation_set())?;
    let report = run_simulation(&cfg)?;

    let dir = out_dir(&out.or(file.get("out")?).unwrap_or_else(|| PathBuf::from("simulation_out")))?;
    write_file(&dir, "report.csv", |w| Ok(report.write_csv(w)?))?;
    write_file(&dir, "replications.csv", |w| Ok(report.write_replications_csv(w)?))?;
    let table = report.to_table();
    write_file(&dir, "table.txt", |w| Ok(w.write_all(table.as_bytes())?))?;
    print!("{table}");
    let failed: usize = report.summaries.iter().map(|s| s.failed).sum();
    if failed > 0 {
        eprintln!("{failed} chain(s) failed; see replications.csv");
    }
    if report.summaries.iter().all(|s| s.completed == 0) {
        return Err(CliError::Numerical("every chain failed".into()));
    }
    Ok(())
}

fn density_prior(args: &PriorArgs, kind: PriorKind) -> CliResult<PriorSpec> {
    reject_unused(args, kind)?;
    if args.a.is_some() {
        return Err(input("--a does not affect the marginal density; set --a-pi and --b"));
    }
    Ok(match kind {
        PriorKind::R2d2 => {
            let a_pi = args.a_pi.unwrap_or(0.5);
            PriorSpec::R2d2(R2d2Params::new(a_pi, args.b.unwrap_or(0.5), a_pi)?)
        }
        PriorKind::Dl => PriorSpec::Dl(DlParams::new(args.a_d.unwrap_or(0.5))?),
        PriorKind::Hs => PriorSpec::Hs(HsParams::new(args.tau.unwrap_or(1.0))?),
        PriorKind::HsPlus => PriorSpec::HsPlus(HsParams::new(args.tau.unwrap_or(1.0))?),
    })
}

/// The four priors tuned to a unit interquartile range, with the R2-D2
/// concentration tied to half the DL one.
fn matched_priors(opts: &EvalOptions) -> CliResult<Vec<PriorSpec>> {
    let dl = iqr_calibrate(&PriorSpec::Dl(DlParams::new(0.5)?), 1.0, opts)?;
    let PriorSpec::Dl(d) = dl else { unreachable!() };
    let a_pi = d.a_d / 2.0;
    let r2 = iqr_calibrate(&PriorSpec::R2d2(R2d2Params::new(a_pi, 0.5, a_pi)?), 1.0, opts)?;
    let hs = iqr_calibrate(&PriorSpec::Hs(HsParams::new(1.0)?), 1.0, opts)?;
    let hp = iqr_calibrate(&PriorSpec::HsPlus(HsParams::new(1.0)?), 1.0, opts)?;
    Ok(vec![r2, dl, hs, hp])
}

pub fn density(prior: PriorArgs, grid: GridArgs, out: Option<PathBuf>, config: Option<PathBuf>) -> CliResult<()> {
    let file = ConfigFile::load(config.as_deref())?;
    let (prior, grid) = (prior.or(file.group()?), grid.or(file.group()?));
    let opts = EvalOptions::default();
    let (lo, hi, points) = (grid.grid_lo.unwrap_or(0.01), grid.grid_hi.unwrap_or(5.0), grid.points.unwrap_or(500));
    if !(lo < hi) || points < 2 {
        return Err(input("need grid-lo < grid-hi and at least 2 points"));
    }
    let betas = match grid.grid.unwrap_or(GridKind::Linear) {
        GridKind::Linear => (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect(),
        GridKind::Log if lo > 0.0 => log_spaced(lo, hi, points),
        GridKind::Log => return Err(input("a log grid needs grid-lo > 0")),
    };
    let specs = match prior.prior {
        Some(kind) => vec![density_prior(&prior, kind)?],
        None => {
            if prior.a.or(prior.b).or(prior.a_pi).or(prior.a_d).or(prior.tau).is_some() {
                return Err(input("hyperparameter flags need --prior"));
            }
            matched_priors(&opts)?
        }
    };
    let curves = specs
        .iter()
        .map(|s| DensityCurve::evaluate(s, &s.label(), &betas, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let write = |w: &mut dyn Write| -> CliResult<()> {
        writeln!(w, "beta,log_density,prior_label")?;
        for c in &curves {
            for (b, l) in c.beta_grid.iter().zip(&c.log_density) {
                writeln!(w, "{},{},{}", sci(*b), sci(*l), csv_field(&c.prior))?;
            }
        }
        Ok(())
    };
    match out.or(file.get("out")?) {
        Some(dir) => {
            let dir = out_dir(&dir)?;
            let path = write_file(&dir, "density.csv", |w| write(w))?;
            eprintln!("wrote {}", path.display());
        }
        None => write(&mut std::io::stdout().lock())?,
    }
    Ok(())
}

pub fn screen(io: IoArgs, k: Option<usize>, config: Option<PathBuf>) -> CliResult<()> {
    let file = ConfigFile::load(config.as_deref())?;
    let io = io.or(file.group()?);
    let k = required(k.or(file.get("k")?), "k")?;
    let in_x = required(io.in_x, "in-x")?;
    let (x, y) = read_xy(&in_x, &required(io.in_y, "in-y")?)?;
    let names = read_table(&in_x)?.header;
    let picked = screen_by_marginal_correlation(&x, &y, k)?;
    let cors = shrinkage::experiments::screen::abs_marginal_correlations(&x, &y)?;
    let dir = out_dir(&io.out.unwrap_or_else(|| PathBuf::from("screen_out")))?;
    let path = write_file(&dir, "screen.csv", |w| {
        writeln!(w, "rank,column,name,abs_correlation")?;
        for (r, &j) in picked.iter().enumerate() {
            let name = names.as_ref().map(|h| h[j].as_str()).unwrap_or("");
            writeln!(w, "{},{j},{},{}", r + 1, csv_field(name), sci(cors[j]))?;
        }
        Ok(())
    })?;
    eprintln!("kept {k} of {} columns; wrote {}", x.ncols(), path.display());
    Ok(())
}

pub fn predict(
    split: SplitArgs,
    prior: PriorArgs,
    mcmc: McmcArgs,
    io: IoArgs,
    config: Option<PathBuf>,
) -> CliResult<()> {
    let file = ConfigFile::load(config.as_deref())?;
    let (split, prior, mcmc, io) = (
        split.or(file.group()?),
        prior.or(file.group()?),
        mcmc.or(file.group()?),
        io.or(file.group()?),
    );
    let (x, mut y) = read_xy(&required(io.in_x, "in-x")?, &required(io.in_y, "in-y")?)?;
    let seed = mcmc.seed.unwrap_or(DEFAULT_SEED);
    if split.permute.unwrap_or(false) {
        y = permuted_response(&y, seed);
    }
    let cfg = SplitConfig {
        splits: split.splits.unwrap_or(20),
        test_size: split.test_size.unwrap_or(5),
        screen_k: split.screen_k,
        keep_columns: split.keep.unwrap_or_default(),
        base_seed: seed,
    };
    let fitted_p = cfg.screen_k.map_or(x.ncols(), |k| k + cfg.keep_columns.len());
    let priors = single_or(&prior, fitted_p, x.nrows() - cfg.test_size.min(x.nrows()), PriorRecipe::prediction_set())?;
    let mc = mcmc_config(&mcmc, 2_000, 1_000)?;
    let table = train_test_evaluate(&x, &y, &cfg, &priors, &mc)?;

    let dir = out_dir(&io.out.unwrap_or_else(|| PathBuf::from("predict_out")))?;
    write_file(&dir, "mspe.csv", |w| Ok(table.write_csv(w)?))?;
    println!("{:<20} {:>10} {:>10}", "prior", "MSPE", "se");
    for r in &table.rows {
        println!("{:<20} {:>10.4} {:>10.4}", r.prior, r.mean, r.se);
    }
    println!("{:<20} {:>10.4}", "training mean", table.null_mean);
    for e in &table.errors {
        eprintln!("{e}");
    }
    if table.rows.iter().all(|r| r.per_split.iter().all(Option::is_none)) {
        return Err(CliError::Numerical("every chain failed".into()));
    }
    if split.agreement.unwrap_or(false) {
        let (_, tstats) = full_data_tstats(&x, &y, &cfg, &priors, &mc)?;
        let labels: Vec<String> = priors.iter().map(|p| p.label()).collect();
        write_file(&dir, "agreement.csv", |w| Ok(write_agreement_csv(&labels, &tstats, w)?))?;
    }
    Ok(())
}

pub fn diagnose(diag: DiagArgs, out: Option<PathBuf>, config: Option<PathBuf>) -> CliResult<()> {
    let file = ConfigFile::load(config.as_deref())?;
    let diag = diag.or(file.group()?);
    let path = required(diag.draws, "draws")?;
    let t = read_table(&path)?;
    let Some(header) = t.header.clone() else {
        return Err(input(format!("{} needs a header row naming the columns", path.display())));
    };
    let columns: Vec<(String, Vec<f64>)> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.as_str() != "iteration")
        .map(|(j, h)| (h.clone(), t.column(j)))
        .collect();
    let max_lag = diag.max_lag.unwrap_or(50).min(t.rows.saturating_sub(1));
    let report = diagnose_columns(&columns, max_lag)?;
    let dir = out_dir(&out.or(file.get("out")?).unwrap_or_else(|| default_dir(&path)))?;
    write_file(&dir, "diagnostics.csv", |w| {
        writeln!(w, "column,mean,q025,q500,q975,ess,degenerate")?;
        for d in &report {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                csv_field(&d.name),
                sci(d.mean),
                sci(d.q025),
                sci(d.q500),
                sci(d.q975),
                sci(d.ess),
                d.degenerate
            )?;
        }
        Ok(())
    })?;
    write_file(&dir, "acf.csv", |w| {
        writeln!(w, "column,lag,acf")?;
        for d in &report {
            for (k, a) in d.acf.iter().enumerate() {
                writeln!(w, "{},{k},{}", csv_field(&d.name), sci(*a))?;
            }
        }
        Ok(())
    })?;
    println!("{:<16} {:>12} {:>10}", "column", "mean", "ESS");
    for d in &report {
        println!("{:<16} {:>12.4} {:>10.1}", d.name, d.mean, d.ess);
    }
    Ok(())
}

fn default_dir(draws: &Path) -> PathBuf {
    draws.parent().map(Path::to_path_buf).unwrap_or_default()
}
