//! Command-line front end: envelope chains for group files, lemma
//! verification over a small-group catalog, and the symbolic descending
//! chain in the symmetric group on ℕ.

pub mod catalog;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ekchain::chains::{
    default_kmax, ek_chain, verify_bryant_lemma, verify_ek_structure, verify_nilpotent_envelope,
};
use ekchain::symnat::model::{check_periodicity, check_xor_closed, DEFAULT_CELL_BUDGET, MAX_ORACLE_LEVEL};
use ekchain::symnat::{
    ascent_witness, brute_force_level, descent_witness, gxl_generators, BitFn, IterChainModel,
    SymElem, SymNatError,
};
use ekchain::{CheckRecord, FiniteGroup, GroupError, GroupFile, Status, DEFAULT_CAP};
use rayon::prelude::*;
use thiserror::Error;

use report::{Format, Report, Witness};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{path}: {source}")]
    Input { path: String, source: GroupError },
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input {
                source: GroupError::CapExceeded { .. },
                ..
            }
            | CliError::Resource(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ekchain", version, about = "Iterated centralizers and E_k envelope chains")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Largest group order enumerated before giving up
    #[arg(long, default_value_t = DEFAULT_CAP, global = true)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bryant,
    Structure,
    Nilpotent,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute E_0(H) >= E_1(H) >= ... for H given by a subgroup file
    Ekchain {
        group_file: PathBuf,
        subgroup_file: PathBuf,
        /// Last index computed [default: class of H if nilpotent, else 2*ceil(log2 |G|) + 2]
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Check the chain lemmas over every subgroup on at most two generators
    /// of each catalog group
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Directory of `*.grp` files replacing the built-in catalog
        #[arg(long)]
        catalog_dir: Option<PathBuf>,
        /// Restrict to the named catalog groups
        #[arg(long = "group")]
        groups: Vec<String>,
    },
    /// Build the symbolic iterated-centralizer levels and descent witnesses
    Counterexample {
        /// Number of levels C^1..C^levels to compute (at least 2)
        #[arg(long, default_value_t = 8)]
        levels: usize,
        /// Largest k' scanned for a descent witness
        #[arg(long, default_value_t = 12)]
        scan_max: usize,
        /// Levels cross-checked by exhaustive enumeration (at most 4)
        #[arg(long, default_value_t = 3)]
        oracle_depth: usize,
        /// Work bound per level, in members times period bits
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET, hide = true)]
        cell_budget: usize,
    },
}

/// What a run produced: a report (possibly partial), an exit status, and an
/// error message for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub report: Option<Report>,
    pub code: i32,
    pub error: Option<String>,
}

impl Outcome {
    fn finished(report: Report) -> Self {
        let code = i32::from(report.failures() > 0);
        Self {
            report: Some(report),
            code,
            error: None,
        }
    }

    fn failed(report: Option<Report>, err: CliError) -> Self {
        Self {
            report,
            code: err.exit_code(),
            error: Some(err.to_string()),
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if cli.cap == 0 {
        return Outcome::failed(None, CliError::Usage("--cap must be positive".into()));
    }
    match &cli.command {
        Command::Ekchain {
            group_file,
            subgroup_file,
            kmax,
        } => match cmd_ekchain(group_file, subgroup_file, *kmax, cli.cap) {
            Ok(r) => Outcome::finished(r),
            Err(e) => Outcome::failed(None, e),
        },
        Command::Verify {
            suite,
            kmax,
            catalog_dir,
            groups,
        } => match cmd_verify(*suite, *kmax, catalog_dir.as_deref(), groups, cli.cap) {
            Ok(r) => Outcome::finished(r),
            Err(e) => Outcome::failed(None, e),
        },
        Command::Counterexample {
            levels,
            scan_max,
            oracle_depth,
            cell_budget,
        } => cmd_counterexample(*levels, *scan_max, *oracle_depth, *cell_budget),
    }
}

fn ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn read_group_file(path: &Path) -> Result<GroupFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    GroupFile::parse(&text).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

pub fn cmd_ekchain(
    group_path: &Path,
    subgroup_path: &Path,
    kmax: Option<usize>,
    cap: usize,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let gfile = read_group_file(group_path)?;
    let hfile = read_group_file(subgroup_path)?;
    let input_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Input { path, source }
    };
    if hfile.degree != gfile.degree {
        return Err(CliError::Input {
            path: subgroup_path.display().to_string(),
            source: GroupError::NotContained(format!(
                "subgroup degree {} differs from group degree {}",
                hfile.degree, gfile.degree
            )),
        });
    }
    let g = gfile.close(cap).map_err(input_err(group_path))?;
    let h = g.subgroup(&hfile.generators).map_err(input_err(subgroup_path))?;
    let kmax = kmax.unwrap_or_else(|| default_kmax(&g, &h));

    let mut report = Report::new(format!(
        "ekchain {} {} --kmax {kmax} --cap {cap}",
        group_path.display(),
        subgroup_path.display()
    ));
    let chain = ek_chain(&g, &h, kmax).map_err(input_err(subgroup_path))?;
    let scope = "input";
    let descending = chain
        .terms
        .windows(2)
        .all(|w| w[1].is_subset(&w[0]))
        && chain.terms.iter().all(|t| h.is_subset(t));
    report.pass_fail(scope, "ekchain.descending", "G = E_0 ⊇ E_1 ⊇ ... ⊇ H", descending, || {
        format!("orders {:?}", chain.orders)
    });
    if kmax >= 1 {
        let cc = g.centralizer_in(&g.full(), &g.centralizer_in(&g.full(), &h));
        report.pass_fail(
            scope,
            "ekchain.double_centralizer",
            "E_1(H) = C_G(C_G(H))",
            chain.terms[1] == cc,
            || format!("|E_1| = {}, |C_G(C_G(H))| = {}", chain.terms[1].order(), cc.order()),
        );
    }
    match chain.subgroup_class {
        Some(c) if chain.guaranteed_stable => {
            let c = c.max(1);
            let ok = chain.terms[c..].iter().all(|t| *t == chain.terms[c]);
            report.pass_fail(
                scope,
                "ekchain.stable_from_class",
                "E_l = E_c for c <= l <= kmax",
                ok,
                || format!("orders {:?}", chain.orders),
            );
        }
        _ => report.push(
            scope,
            CheckRecord {
                id: "ekchain.stable_from_class".into(),
                claim: "E_l = E_c for c <= l <= kmax".into(),
                status: Status::Skipped,
                witness: Some(chain.stability_reason.clone()),
            },
        ),
    }
    report.witnesses.push(
        Witness::new("ekchain", scope)
            .with("group_order", g.order())
            .with("subgroup_order", h.order())
            .with("subgroup_class", chain.subgroup_class)
            .with("orders", chain.orders.clone())
            .with("stable_run", chain.stable_run)
            .with("guaranteed_stable", chain.guaranteed_stable)
            .with("stability_reason", chain.stability_reason.clone()),
    );
    report.timings.insert("total".into(), ms(start));
    Ok(report)
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Bryant => "bryant",
        Suite::Structure => "structure",
        Suite::Nilpotent => "nilpotent",
        Suite::All => "all",
    }
}

fn run_suites(g: &FiniteGroup, h: &ekchain::Subgroup, suite: Suite, kmax: usize) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Bryant | Suite::All) {
        out.extend(verify_bryant_lemma(g, h, kmax));
    }
    if matches!(suite, Suite::Structure | Suite::All) {
        out.extend(verify_ek_structure(g, h, kmax));
    }
    if matches!(suite, Suite::Nilpotent | Suite::All) {
        out.extend(verify_nilpotent_envelope(g, h));
    }
    out
}

pub fn cmd_verify(
    suite: Suite,
    kmax: usize,
    catalog_dir: Option<&Path>,
    only: &[String],
    cap: usize,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut entries = match catalog_dir {
        Some(dir) => catalog::from_dir(dir)?,
        None => catalog::builtin(),
    };
    if !only.is_empty() {
        if let Some(missing) = only.iter().find(|n| !entries.iter().any(|e| &e.name == *n)) {
            return Err(CliError::Usage(format!("no catalog group named {missing}")));
        }
        entries.retain(|e| only.contains(&e.name));
    }
    let mut command = format!("verify --suite {} --kmax {kmax} --cap {cap}", suite_name(suite));
    if let Some(dir) = catalog_dir {
        command.push_str(&format!(" --catalog-dir {}", dir.display()));
    }
    for n in only {
        command.push_str(&format!(" --group {n}"));
    }
    let mut report = Report::new(command);

    let mut groups = Vec::new();
    for e in &entries {
        let g = catalog::close(e, cap).map_err(|source| CliError::Input {
            path: e.name.clone(),
            source,
        })?;
        let subs = catalog::small_subgroups(&g);
        report.witnesses.push(
            Witness::new("group", &e.name)
                .with("order", g.order())
                .with("subgroups", subs.len())
                .with("class", g.nilpotency_class()),
        );
        groups.push((e.name.clone(), g, subs));
    }
    let enumerated = ms(start);

    let jobs: Vec<(usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, (_, _, subs))| (0..subs.len()).map(move |si| (gi, si)))
        .collect();
    let results: Vec<Vec<CheckRecord>> = jobs
        .par_iter()
        .map(|&(gi, si)| {
            let (_, g, subs) = &groups[gi];
            run_suites(g, &subs[si].subgroup, suite, kmax)
        })
        .collect();
    for (&(gi, si), records) in jobs.iter().zip(results) {
        let (name, _, subs) = &groups[gi];
        let scope = format!("{name} {}", subs[si].label());
        for r in records {
            report.push(&scope, r);
        }
    }
    report.timings.insert("enumerate".into(), enumerated);
    report.timings.insert("total".into(), ms(start));
    Ok(report)
}

/// All purely periodic functions with period at most 4.
fn short_periodic() -> Vec<BitFn> {
    let mut out: Vec<BitFn> = (1..=4usize)
        .flat_map(|p| (0u32..1 << p).map(move |m| BitFn::periodic((0..p).map(|x| m >> x & 1 == 1).collect())))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn cmd_counterexample(levels: usize, scan_max: usize, oracle_depth: usize, cell_budget: usize) -> Outcome {
    if levels < 2 {
        return Outcome::failed(None, CliError::Usage("--levels must be at least 2".into()));
    }
    if oracle_depth > MAX_ORACLE_LEVEL {
        return Outcome::failed(
            None,
            CliError::Usage(format!("--oracle-depth must be at most {MAX_ORACLE_LEVEL}")),
        );
    }
    let start = Instant::now();
    let mut report = Report::new(format!(
        "counterexample --levels {levels} --scan-max {scan_max} --oracle-depth {oracle_depth}"
    ));
    let budget_err = |report: Report, e: SymNatError| Outcome::failed(Some(report), CliError::Resource(e.to_string()));

    let mut model = match IterChainModel::with_budget(1, cell_budget) {
        Ok(m) => m,
        Err(e) => return budget_err(report, e),
    };
    let build = model.extend_to(levels);
    let reached = model.depth();
    for i in 1..=reached {
        report.witnesses.push(
            Witness::new("level", format!("C^{i}"))
                .with("size", model.levels[i].len())
                .with("period_exponent", model.period_exponent(i)),
        );
    }
    if let Err(e) = build {
        report.timings.insert("levels".into(), ms(start));
        return budget_err(report, e);
    }
    report.timings.insert("levels".into(), ms(start));

    let lvl1_ok = model.levels[1] == [BitFn::zero(), BitFn::ones()];
    report.pass_fail("C^1", "counterexample.level_one", "C^1 = {0^∞, 1^∞}", lvl1_ok, || {
        model.levels[1].iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")
    });
    let sizes = model.sizes();
    report.pass_fail(
        "C^1..",
        "counterexample.ascending",
        "|C^i| < |C^{i+1}|",
        sizes[1..].windows(2).all(|w| w[0] < w[1]),
        || format!("sizes {:?}", &sizes[1..]),
    );
    for i in 1..=levels {
        let scope = format!("C^{i}");
        let lvl = &model.levels[i];
        let periodic = check_periodicity(lvl, i);
        report.pass_fail(
            &scope,
            "counterexample.periodic",
            "members purely periodic with period dividing 2^i, nonzero ones of infinite support",
            periodic.is_ok(),
            || periodic.unwrap_err().to_string(),
        );
        let closed = check_xor_closed(lvl, i);
        report.pass_fail(&scope, "counterexample.xor_closed", "closed under XOR, contains 0", closed.is_ok(), || {
            closed.unwrap_err().to_string()
        });
    }
    let oracle_start = Instant::now();
    for i in 1..=oracle_depth.min(levels) {
        let brute = brute_force_level(i).expect("depth checked above");
        report.pass_fail(
            &format!("C^{i}"),
            "counterexample.oracle",
            "linear solve agrees with exhaustive enumeration",
            brute == model.levels[i],
            || format!("{} enumerated vs {} solved", brute.len(), model.levels[i].len()),
        );
    }
    report.timings.insert("oracle".into(), ms(oracle_start));

    for i in 1..levels {
        let scope = format!("C^{i}");
        match ascent_witness(i, &model) {
            Ok(w) => {
                report.pass_fail(&scope, "counterexample.ascent", "some g in C^{i+1} \\ C^i has delta(g) in C^i", true, String::new);
                report.witnesses.push(
                    Witness::new("ascent", scope)
                        .with("h", w.h.to_string())
                        .with("x0", w.x0)
                        .with("g", w.g.to_string()),
                );
            }
            Err(e) => report.pass_fail(&scope, "counterexample.ascent", "some g in C^{i+1} \\ C^i has delta(g) in C^i", false, || e.to_string()),
        }
    }

    let probes = short_periodic();
    for k in 0..levels {
        let scope = format!("C^{}", k + 1);
        let mut bad = None;
        'outer: for p in &probes {
            for h in &model.levels[k + 1] {
                let c = SymElem::commutator(&SymElem::from_bits(p.clone()), &SymElem::from_bits(h.clone()));
                if !c.is_identity() {
                    bad = Some(format!("[B({p}), B({h})] = {c}"));
                    break 'outer;
                }
            }
        }
        report.pass_fail(
            &scope,
            "counterexample.products_commute",
            "block involution products commute with every level member",
            bad.is_none(),
            || bad.clone().unwrap_or_default(),
        );
    }

    let descent_start = Instant::now();
    for k in 0..=levels - 2 {
        let scope = format!("k={k}");
        let l = model.period_exponent(k + 1).expect("level exists");
        let mut bad = None;
        for x in 0..1u64 << l {
            for g in gxl_generators(x, l, 6).expect("x < 2^l") {
                if let Some(h) = model.levels[k + 1]
                    .iter()
                    .find(|h| !SymElem::commutator(&g, &SymElem::from_bits((*h).clone())).is_identity())
                {
                    bad.get_or_insert_with(|| format!("{g} vs {h}"));
                }
            }
        }
        report.pass_fail(
            &scope,
            "counterexample.block_swaps_commute",
            "swaps of blocks congruent mod 2^l commute with C^{k+1}",
            bad.is_none(),
            || bad.clone().unwrap_or_default(),
        );

        let found = loop {
            match descent_witness(k, scan_max, &model) {
                Err(SymNatError::ModelTooShallow { needed, .. }) if needed <= scan_max + 1 => {
                    if let Err(e) = model.extend_to(needed) {
                        report.timings.insert("descent".into(), ms(descent_start));
                        return budget_err(report, e);
                    }
                }
                other => break other,
            }
        };
        match found {
            Ok(w) => {
                let expected = format!(
                    "({} {})({} {})",
                    2 * w.x0,
                    2 * w.x0 + 1,
                    2 * (w.x0 + (1 << w.l)),
                    2 * (w.x0 + (1 << w.l)) + 1
                );
                let got = w.commutator.to_string();
                report.pass_fail(
                    &scope,
                    "counterexample.descent",
                    "a block swap in E_{k+1} outside E_{k'+1} for some k' > k",
                    got == expected,
                    || format!("[g,h] = {got}, expected {expected}"),
                );
                report.witnesses.push(
                    Witness::new("descent", scope)
                        .with("k_prime", w.k_prime)
                        .with("l", w.l)
                        .with("x0", w.x0)
                        .with("g", w.g.to_finite_permutation().map(|p| p.to_string()).unwrap_or_default())
                        .with("h", w.h.to_string())
                        .with("commutator", got),
                );
            }
            Err(e) => report.pass_fail(
                &scope,
                "counterexample.descent",
                "a block swap in E_{k+1} outside E_{k'+1} for some k' > k",
                false,
                || e.to_string(),
            ),
        }
    }
    report.timings.insert("descent".into(), ms(descent_start));
    report.timings.insert("total".into(), ms(start));
    Outcome::finished(report)
}
