use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use ratiosim::distributions::{zeta_theoretical_mean, TruncatedZeta};
use ratiosim::experiment::{
    correlation_table_tsv, ecdf_csv, figure_stem, fit_table_tsv, histogram_csv, ranking_tsv,
    run_cell, summary_table_tsv, CellOutcome, SweepSettings, Which,
};
use ratiosim::fitting::{fit_loglogistic, FitOptions};
use ratiosim::ingest::{parse_citation_counts, parse_country_totals, rank_countries, read_numeric_column};
use ratiosim::stats::{ks_exact_p_value, ks_two_sample, EXACT_P_MAX_CELLS};

use crate::exit::usage;
use crate::{FitArgs, KsArgs, RankArgs, SimulateArgs, ZetaCheckArgs};

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn validate(args: &SimulateArgs) -> Result<()> {
    if let Some(g) = args.gammas.iter().find(|&&g| !(g > 1.0 && g.is_finite())) {
        return Err(usage(format!("--gamma must exceed 1, got {g}")));
    }
    if args.ns.contains(&0) {
        return Err(usage("--n must be at least 1"));
    }
    if args.reps < 2 {
        return Err(usage("--reps must be at least 2 (the bootstrap needs two pairs)"));
    }
    if args.bootstrap < 1 {
        return Err(usage("--bootstrap must be at least 1"));
    }
    if !(args.confidence > 0.0 && args.confidence < 1.0) {
        return Err(usage(format!("--confidence must lie in (0, 1), got {}", args.confidence)));
    }
    if args.truncation < 1 {
        return Err(usage("--truncation must be at least 1"));
    }
    if args.bins < 1 {
        return Err(usage("--bins must be at least 1"));
    }
    if args.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    gammas: &'a [f64],
    ns: &'a [usize],
    reps: usize,
    bootstrap: usize,
    confidence: f64,
    truncation: usize,
    citations_file: String,
    fit_loglogistic: bool,
    emit_figures: bool,
    correlation_table: bool,
    bins: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    software: &'static str,
    version: &'static str,
    seed: u64,
    config: ConfigEcho<'a>,
    /// Command line that regenerates every output file.
    command: Vec<String>,
    citation_law: CitationEcho,
    outputs: Vec<String>,
    threads: usize,
    wall_clock_seconds: f64,
}

#[derive(Serialize)]
struct CitationEcho {
    rows: usize,
    papers: u64,
    mean: f64,
}

fn replay_command(args: &SimulateArgs) -> Vec<String> {
    let mut cmd = vec!["ratiosim".to_string(), "simulate".to_string()];
    for g in &args.gammas {
        cmd.extend(["--gamma".into(), g.to_string()]);
    }
    for n in &args.ns {
        cmd.extend(["--n".into(), n.to_string()]);
    }
    cmd.extend([
        "--reps".into(),
        args.reps.to_string(),
        "--bootstrap".into(),
        args.bootstrap.to_string(),
        "--confidence".into(),
        args.confidence.to_string(),
        "--truncation".into(),
        args.truncation.to_string(),
        "--seed".into(),
        args.seed.to_string(),
        "--citations-file".into(),
        args.citations_file.display().to_string(),
        "--out-dir".into(),
        args.out_dir.display().to_string(),
        "--bins".into(),
        args.bins.to_string(),
    ]);
    for (flag, on) in [
        ("--fit-loglogistic", args.fit_loglogistic),
        ("--emit-figures", args.emit_figures),
        ("--correlation-table", args.correlation_table),
    ] {
        if on {
            cmd.push(flag.into());
        }
    }
    cmd
}

/// Collects output files in memory; they are written only after every cell
/// has been computed.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Outputs {
    fn add(&mut self, name: String, contents: String) {
        self.files.push((name, contents));
    }

    fn write_all(&self) -> Result<Vec<String>> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("cannot create output directory {}", self.dir.display()))?;
        for (name, contents) in &self.files {
            let path = self.dir.join(name);
            fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(self.files.iter().map(|(n, _)| n.clone()).collect())
    }
}

fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, contents).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot finalize {}", path.display()))?;
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    validate(&args)?;
    let started = Instant::now();
    let law = parse_citation_counts(open(&args.citations_file)?)
        .with_context(|| format!("reading {}", args.citations_file.display()))?;

    let mut settings = SweepSettings::new(Arc::new(law), args.seed);
    settings.replications = args.reps;
    settings.bootstrap_resamples = args.bootstrap;
    settings.confidence = args.confidence;
    settings.truncation = args.truncation;
    settings.fit = args.fit_loglogistic;

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = args.threads {
            b = b.num_threads(t);
        }
        b.build().context("cannot start worker threads")?
    };

    let mut cells: Vec<CellOutcome> = Vec::new();
    for &gamma in &args.gammas {
        for &n in &args.ns {
            let cell = pool.install(|| run_cell(&settings, gamma, n))?;
            if let Some(c) = &cell.correlation {
                if c.undefined > 0 {
                    eprintln!(
                        "warning: gamma={gamma} n={n}: {} replications had an undefined correlation and were excluded",
                        c.undefined
                    );
                }
            }
            for f in &cell.fits {
                if !f.result.converged {
                    eprintln!("warning: gamma={gamma} n={n}: {} fit did not converge", f.which.label());
                }
                if f.dropped_zeros > 0 {
                    eprintln!(
                        "warning: gamma={gamma} n={n}: dropped {} zero {} values before fitting",
                        f.dropped_zeros,
                        f.which.label()
                    );
                }
            }
            cells.push(cell);
        }
    }

    let mut out = Outputs { dir: args.out_dir.clone(), files: Vec::new() };
    let summaries: Vec<_> = cells.iter().map(|c| c.summary).collect();
    let table = summary_table_tsv(&summaries);
    print!("{table}");
    out.add("summary.tsv".into(), table);

    if args.correlation_table {
        let rows: Vec<_> = cells.iter().filter_map(|c| c.correlation).collect();
        out.add("correlation.tsv".into(), correlation_table_tsv(&rows));
    }
    if args.fit_loglogistic {
        let rows: Vec<_> = cells
            .iter()
            .flat_map(|c| c.fits.iter().map(move |f| (c.summary.gamma, c.summary.n, *f)))
            .collect();
        out.add("fits.tsv".into(), fit_table_tsv(&rows));
    }
    if args.emit_figures {
        for cell in &cells {
            for which in [Which::Aor, Which::Roa] {
                let sample = cell.sample(which);
                let stem = figure_stem(which, cell.summary.gamma, cell.summary.n);
                out.add(format!("hist_{stem}.csv"), histogram_csv(&sample, args.bins, cell.fit(which))?);
                out.add(format!("ecdf_{stem}.csv"), ecdf_csv(&sample, cell.fit(which))?);
            }
        }
    }
    let outputs = out.write_all()?;

    let manifest = Manifest {
        software: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        seed: args.seed,
        config: ConfigEcho {
            gammas: &args.gammas,
            ns: &args.ns,
            reps: args.reps,
            bootstrap: args.bootstrap,
            confidence: args.confidence,
            truncation: args.truncation,
            citations_file: args.citations_file.display().to_string(),
            fit_loglogistic: args.fit_loglogistic,
            emit_figures: args.emit_figures,
            correlation_table: args.correlation_table,
            bins: args.bins,
        },
        command: replay_command(&args),
        citation_law: CitationEcho {
            rows: settings.citation_law.values().len(),
            papers: settings.citation_law.total(),
            mean: settings.citation_law.mean(),
        },
        outputs,
        threads: pool.current_num_threads(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    write_atomically(&args.out_dir.join("manifest.json"), &json)?;
    Ok(())
}

pub fn rank(args: RankArgs) -> Result<()> {
    let records = parse_country_totals(open(&args.file)?)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let mut ranked = rank_countries(&records)?;
    if let Some(top) = args.top {
        ranked.truncate(top);
    }
    print!("{}", ranking_tsv(&ranked));
    Ok(())
}

pub fn fit(args: FitArgs) -> Result<()> {
    if !(args.tolerance > 0.0) {
        return Err(usage("--tolerance must be positive"));
    }
    let values = read_numeric_column(open(&args.file)?, &args.column)
        .with_context(|| format!("reading {}", args.file.display()))?;
    if values.iter().any(|&v| v < 0.0) {
        return Err(ratiosim::Error::Domain("log-logistic support excludes negative values".into()).into());
    }
    let positive: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    if positive.len() < values.len() {
        eprintln!("warning: dropped {} zero values before fitting", values.len() - positive.len());
    }
    let opts = FitOptions { tolerance: args.tolerance, max_iters: args.max_iters };
    let result = fit_loglogistic(&positive, &opts)
        .map_err(|e| ratiosim::Error::Numerical(format!("log-logistic fit failed: {e}")))?;
    let p = result.params;
    let logistic = p.to_logistic();
    println!("n\t{}", positive.len());
    println!("alpha\t{:.6}", p.alpha());
    println!("beta\t{:.6}", p.beta());
    println!("log_beta\t{:.6}", logistic.location);
    println!("inv_alpha\t{:.6}", logistic.scale);
    match p.mean() {
        Ok(m) => println!("mean\t{m:.6}"),
        Err(_) => println!("mean\tinf"),
    }
    println!("log_likelihood\t{:.6}", result.log_likelihood);
    println!("iterations\t{}", result.iterations);
    println!("converged\t{}", result.converged);
    println!("ks_statistic\t{:.6}", result.ks_statistic);
    if !result.converged {
        return Err(ratiosim::Error::Numerical(format!(
            "simplex did not converge within {} iterations",
            args.max_iters
        ))
        .into());
    }
    Ok(())
}

pub fn ks(args: KsArgs) -> Result<()> {
    let x = read_numeric_column(open(&args.first)?, &args.column)
        .with_context(|| format!("reading {}", args.first.display()))?;
    let y = read_numeric_column(open(&args.second)?, &args.column)
        .with_context(|| format!("reading {}", args.second.display()))?;
    let r = ks_two_sample(&x, &y)?;
    println!("n1\t{}", r.n1);
    println!("n2\t{}", r.n2);
    println!("statistic\t{:.6}", r.statistic);
    println!("p_value\t{:.6}", r.p_value);
    if r.n1 * r.n2 <= EXACT_P_MAX_CELLS {
        println!("exact_p_value\t{:.6}", ks_exact_p_value(&x, &y)?);
    }
    Ok(())
}

pub fn zeta_check(args: ZetaCheckArgs) -> Result<()> {
    if args.truncation < 1 {
        return Err(usage("--truncation must be at least 1"));
    }
    println!("gamma\ttruncation\ttruncated_mean\ttheoretical_mean\tabs_difference");
    for &gamma in &args.gammas {
        let truncated = TruncatedZeta::new(gamma, args.truncation)?.mean();
        match zeta_theoretical_mean(gamma) {
            Ok(theory) => println!(
                "{gamma:?}\t{}\t{truncated:.4}\t{theory:.4}\t{:.2e}",
                args.truncation,
                (truncated - theory).abs()
            ),
            Err(_) => println!("{gamma:?}\t{}\t{truncated:.4}\tinf\tinf", args.truncation),
        }
    }
    Ok(())
}
