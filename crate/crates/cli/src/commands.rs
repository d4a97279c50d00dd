use std::fs;
use std::path::Path;
use std::time::Instant;

use ces_core::explicit_basis::{full_explicit_basis, labeled_vectors, verify_explicit_basis};
use ces_core::io::{lambda_sidecar_path, read_subspace, search_outcome_to_json, subspace_to_json, write_lambdas, SearchOutcomeFile};
use ces_core::product_search::{seesaw_search, SeesawConfig};
use ces_core::stabilizer::{stabilizer_suite, StabilizerCode, VerificationMode};
use ces_core::tensor::{MultipartiteSpace, Subspace};
use ces_core::vandermonde::{construct_ces, lambda_count, max_ces_dim, verify_no_product_constraints, LambdaMode, LambdaSet};
use ces_core::{Error, VerificationReport};
use serde_json::json;

use crate::{Global, LambdaChoice, ModeChoice};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn finish(g: &Global, mut report: VerificationReport, start: Instant) -> VerificationReport {
    report.input("seed", g.seed);
    if g.timing {
        report.wall_time_ms = start.elapsed().as_millis() as u64;
    }
    report
}

/// Prints `report` and turns a failed report into exit code 3.
fn conclude(g: &Global, report: &VerificationReport) -> CmdResult {
    if g.json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(format!("{} failed: {}", report.command, names.join(", "))))
    }
}

fn lambda_set(choice: LambdaChoice, n: usize, seed: u64) -> Result<LambdaSet, Failure> {
    let mode = match choice {
        LambdaChoice::Roots => LambdaMode::RootsOfUnity,
        LambdaChoice::Chebyshev => LambdaMode::Chebyshev,
        LambdaChoice::Jittered => LambdaMode::Jittered { seed },
    };
    Ok(LambdaSet::from_mode(mode, n)?)
}

fn build_ces(dims: &[usize], choice: LambdaChoice, seed: u64) -> Result<(Subspace, LambdaSet, VerificationReport), Failure> {
    let space = MultipartiteSpace::new(dims.to_vec())?;
    let n = lambda_count(dims)?;
    let lambdas = lambda_set(choice, n, seed)?;
    let s = construct_ces(&space, Some(&lambdas))?;
    let mut report = VerificationReport::new("construct");
    report.input("dims", dims).input("lambdas", lambdas.mode);
    report.count("dim S = prod d - sum d + k - 1", s.dim(), max_ces_dim(dims)?);
    report.absorb("constraints", verify_no_product_constraints(&s, &lambdas)?);
    Ok((s, lambdas, report))
}

pub fn construct(g: &Global, dims: &[usize], choice: LambdaChoice) -> CmdResult {
    let start = Instant::now();
    let (s, lambdas, report) = build_ces(dims, choice, g.seed)?;
    let report = finish(g, report, start);
    match &g.out {
        Some(path) => {
            write_file(path, &subspace_to_json(&s, None))?;
            write_lambdas(&lambda_sidecar_path(path), &lambdas)?;
            conclude(g, &report)
        }
        None if g.json => {
            println!("{}", subspace_to_json(&s, None));
            if report.passed() { Ok(()) } else { conclude(g, &report) }
        }
        None => conclude(g, &report),
    }
}

pub fn basis(g: &Global, n: usize) -> CmdResult {
    let start = Instant::now();
    let blocks = full_explicit_basis(n)?;
    let (vectors, labels) = labeled_vectors(&blocks);
    let s = Subspace::from_orthonormal(MultipartiteSpace::uniform(n, 2)?, &vectors)
        .map_err(|e| Failure::Verification(format!("explicit basis is not orthonormal: {e}")))?;
    let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    let report = finish(g, verify_explicit_basis(n)?, start);
    if !report.passed() {
        return conclude(g, &report);
    }
    match &g.out {
        Some(path) => {
            write_file(path, &subspace_to_json(&s, Some(labels)))?;
            conclude(g, &report)
        }
        None if g.json => {
            println!("{}", subspace_to_json(&s, Some(labels)));
            Ok(())
        }
        None => conclude(g, &report),
    }
}

fn search_json(path: &Path, cfg: &SeesawConfig, outcome: &ces_core::product_search::SearchOutcome) -> String {
    let file = SearchOutcomeFile::from(outcome);
    let value = json!({
        "source": path.display().to_string(),
        "config": cfg,
        "verdict": file.verdict,
        "best_overlap": file.best_overlap,
        "dims": file.dims,
        "witness": file.witness,
        "per_restart_values": file.per_restart_values,
        "unconverged_restarts": file.unconverged_restarts,
        "note": "none_found is heuristic evidence, not a certificate",
    });
    serde_json::to_string_pretty(&value).unwrap_or_else(|_| search_outcome_to_json(outcome))
}

pub fn search(g: &Global, path: &Path, restarts: usize, max_iters: usize, tol: f64) -> CmdResult {
    let cfg = SeesawConfig { restarts, max_iters, tol_decision: tol, seed: g.seed, ..SeesawConfig::default() };
    cfg.validate()?;
    let loaded = read_subspace(path).map_err(|e| match e {
        Error::Io(_) => Failure::Io(format!("{}: {e}", path.display())),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })?;
    if loaded.orthonormalized {
        eprintln!("warning: {} was not orthonormal; searching an orthonormal basis of its span", path.display());
    }
    let outcome = seesaw_search(&loaded.subspace, &cfg)?;
    let text = search_json(path, &cfg, &outcome);
    if let Some(out) = &g.out {
        write_file(out, &text)?;
    }
    if g.json {
        println!("{text}");
    } else {
        println!(
            "{}: best overlap {:.15} over {} restarts ({} unconverged)",
            serde_json::to_value(outcome.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            outcome.best_overlap,
            restarts,
            outcome.unconverged_restarts.len()
        );
    }
    Ok(())
}

fn stabilizer_report(g: &Global, group: &str, mode: Option<ModeChoice>, samples: usize, pairs: usize) -> Result<VerificationReport, Failure> {
    let start = Instant::now();
    let code = StabilizerCode::parse(group)?;
    let d = code.local_dim();
    let mode = match mode.unwrap_or(if d == 2 { ModeChoice::Exhaustive } else { ModeChoice::Sampled }) {
        ModeChoice::Exhaustive if d > 3 => {
            return Err(Failure::Usage(format!("exhaustive mode supports order at most 3; use --mode sampled for {group}")))
        }
        ModeChoice::Exhaustive => VerificationMode::Exhaustive { vectors: samples },
        ModeChoice::Sampled => VerificationMode::Sampled { pairs, vectors: samples },
    };
    Ok(finish(g, stabilizer_suite(&code, mode, g.seed)?, start))
}

pub fn stabilizer(g: &Global, group: &str, mode: Option<ModeChoice>, samples: usize, pairs: usize) -> CmdResult {
    let report = stabilizer_report(g, group, mode, samples, pairs)?;
    if let Some(path) = &g.out {
        write_file(path, &report.to_json())?;
    }
    conclude(g, &report)
}

pub fn report_bundle(g: &Global) -> CmdResult {
    let dir = g.out.as_ref().ok_or_else(|| Failure::Usage("report-bundle needs --out DIR".into()))?;
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let mut summary = VerificationReport::new("report-bundle");
    summary.input("seed", g.seed);

    for dims in [vec![2, 2], vec![2, 3], vec![3, 3], vec![4, 4], vec![2, 2, 2], vec![2, 2, 3], vec![3, 3, 3]] {
        let tag = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x");
        let (s, lambdas, mut report) = build_ces(&dims, LambdaChoice::Roots, g.seed)?;
        let cfg = SeesawConfig { restarts: 200, seed: g.seed, ..SeesawConfig::default() };
        let outcome = seesaw_search(&s, &cfg)?;
        report.below("seesaw best overlap", outcome.best_overlap, 1.0 - cfg.tol_decision);
        let path = dir.join(format!("ces_{tag}.json"));
        write_file(&path, &subspace_to_json(&s, None))?;
        write_lambdas(&lambda_sidecar_path(&path), &lambdas)?;
        write_file(&dir.join(format!("ces_{tag}.report.json")), &report.to_json())?;
        summary.absorb(&format!("ces {tag}"), report);
    }
    for n in 2..=8 {
        let report = verify_explicit_basis(n)?;
        write_file(&dir.join(format!("basis_{n}.report.json")), &report.to_json())?;
        summary.absorb(&format!("basis n={n}"), report);
    }
    for group in ["Z2", "Z3"] {
        let report = stabilizer_report(g, group, None, 100, 1000)?;
        write_file(&dir.join(format!("stabilizer_{group}.report.json")), &report.to_json())?;
        summary.absorb(&format!("stabilizer {group}"), report);
    }
    write_file(&dir.join("summary.json"), &summary.to_json())?;
    if g.json {
        println!("{}", summary.to_json());
    } else {
        println!(
            "report-bundle: {} ({} checks, {} failed) written to {}",
            if summary.passed() { "PASS" } else { "FAIL" },
            summary.checks.len(),
            summary.failures().count(),
            dir.display()
        );
    }
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Verification("report bundle has failing checks".into()))
    }
}
