use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use subcone::dd::{harvest_step, run_dd_with, HarvestOptions};
use subcone::io::{self as fmt, PairFile, BINARY_MAGIC};
use subcone::ledger::{OrbitLedger, ProbeJournal};
use subcone::model::{subset_from_elements, Triplet};
use subcone::neighbor::{self, BfsOptions, NeighborOptions};
use subcone::order::cstar_order;
use subcone::stats::{self, CaptureEstimate, Histogram};
use subcone::symmetry::{OrbitRecord, SymmetryGroup};
use subcone::{ConeSpec, DdOptions, DdState, Error, InsertionOrder, Int, OrderKind, Ray, RunStatus};

use crate::cli::*;
use crate::manifest::RunManifest;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => e.fmt(f),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Lib(e) => match e {
                Error::Overflow => 4,
                Error::Malformed { .. }
                | Error::Dimension { .. }
                | Error::BaseSetSize(_)
                | Error::InvalidTriplet { .. }
                | Error::SubsetTooSmall { .. }
                | Error::BadOrder(_)
                | Error::ZeroVector
                | Error::NotExtremal
                | Error::Infeasible { .. }
                | Error::SupportRow { .. } => 3,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// How a command ended when it did not error out.
#[derive(Debug)]
pub enum Outcome {
    Complete,
    /// A budget cut the work short; outputs are partial (exit 2).
    Partial(String),
    /// The command ran but its check failed (exit 1).
    Failed(String),
}

fn read_all(p: &Path) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    if p.as_os_str() == "-" {
        io::stdin().lock().read_to_end(&mut buf)?;
    } else {
        File::open(p)?.read_to_end(&mut buf)?;
    }
    Ok(buf)
}

fn create(p: &Path) -> io::Result<BufWriter<Box<dyn Write>>> {
    let w: Box<dyn Write> = if p.as_os_str() == "-" {
        Box::new(io::stdout().lock())
    } else {
        Box::new(File::create(p)?)
    };
    Ok(BufWriter::new(w))
}

/// Text or SDDR1 rays, checked against `dim`.
fn load_rays<N: Int>(p: &Path, dim: usize) -> CliResult<Vec<Ray<N>>> {
    let bytes = read_all(p)?;
    if bytes.starts_with(BINARY_MAGIC) {
        let rays: Vec<Ray<N>> = fmt::read_binary_rays(&bytes[..])?;
        if let Some(r) = rays.iter().find(|r| r.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: r.dim(),
            }
            .into());
        }
        Ok(rays)
    } else {
        Ok(fmt::read_rays(&bytes[..], Some(dim))?)
    }
}

fn save_rays<N: Int>(p: &Path, rays: &[Ray<N>], dim: usize, binary: bool) -> CliResult<()> {
    let mut w = create(p)?;
    if binary {
        fmt::write_binary_rays(rays, dim, &mut w)?;
    } else {
        fmt::write_rays(rays, &mut w)?;
    }
    w.flush()?;
    Ok(())
}

fn save_pool<N: Int>(p: &Path, records: &[OrbitRecord<N>]) -> CliResult<()> {
    let mut w = create(p)?;
    fmt::write_pool(records, &mut w)?;
    w.flush()?;
    Ok(())
}

fn spec_for(m: &mut RunManifest, cone: &ConeArgs) -> CliResult<ConeSpec> {
    m.n = Some(cone.n);
    Ok(ConeSpec::new(cone.n)?)
}

/// `i,j|K` with `K` a string of element digits, or a plain row index.
fn parse_row(spec: &ConeSpec, s: &str) -> CliResult<usize> {
    let bad = || CliError::Usage(format!("cannot parse row `{s}`; expected `i,j|K` or a row index"));
    if let Ok(r) = s.trim().parse::<usize>() {
        return if r < spec.num_rows() { Ok(r) } else { Err(bad()) };
    }
    let (ij, k) = s.split_once('|').ok_or_else(bad)?;
    let (i, j) = ij.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    let k: Vec<usize> = k
        .trim()
        .chars()
        .filter(|c| !matches!(c, ',' | ' ' | '{' | '}'))
        .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
        .collect::<CliResult<_>>()?;
    let t = Triplet::new(i, j, subset_from_elements(&k), spec.n())?;
    spec.row_of(&t).ok_or_else(bad)
}

fn insertion_order(m: &mut RunManifest, spec: &ConeSpec, args: &OrderArgs) -> CliResult<InsertionOrder> {
    m.order = Some(args.order.to_string());
    m.seed = args.seed;
    match &args.order_file {
        Some(p) => {
            m.input(p);
            let rows = fmt::read_order(spec, &read_all(p)?[..])?;
            Ok(InsertionOrder::from_rows(args.order, rows, spec.num_rows())?)
        }
        None => Ok(InsertionOrder::new(args.order, spec, args.seed)),
    }
}

pub fn run<N: Int>(cmd: &Command, m: &mut RunManifest, verbose: bool) -> CliResult<Outcome> {
    match cmd {
        Command::Matrix(a) => matrix(a, m),
        Command::Dd(a) => dd::<N>(a, m, verbose),
        Command::DdStep(a) => dd_step::<N>(a, m),
        Command::Neighbors(a) => neighbors::<N>(a, m, verbose),
        Command::Orbits(a) => orbits::<N>(a, m),
        Command::Harvest(a) => harvest::<N>(a, m, verbose),
        Command::Stats(a) => stats_cmd::<N>(a, m),
        Command::Estimate(a) => estimate::<N>(a, m),
        Command::Verify(a) => verify::<N>(a, m),
        Command::Sample(a) => sample::<N>(a, m),
        Command::Bfs(a) => bfs::<N>(a, m, verbose),
    }
}

fn matrix(a: &MatrixArgs, m: &mut RunManifest) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    let mut w = create(&a.out)?;
    fmt::write_matrix(&spec, &mut w)?;
    w.flush()?;
    m.output(&a.out);
    if let Some(kind) = a.order {
        m.order = Some(kind.to_string());
        m.seed = a.seed;
        if kind.is_dynamic() {
            return Err(CliError::Usage(format!("order `{kind}` is chosen during the run and cannot be written out")));
        }
        let path = match (&a.order_out, a.out.as_os_str() == "-") {
            (Some(p), _) => p.clone(),
            (None, false) => {
                let mut s = a.out.clone().into_os_string();
                s.push(".order");
                s.into()
            }
            (None, true) => return Err(CliError::Usage("--order-out is required when the matrix goes to stdout".into())),
        };
        let order = InsertionOrder::new(kind, &spec, a.seed);
        let mut w = create(&path)?;
        fmt::write_order(&spec, order.rows().expect("static order"), &mut w)?;
        w.flush()?;
        m.output(&path);
    }
    Ok(Outcome::Complete)
}

fn dd<N: Int>(a: &DdArgs, m: &mut RunManifest, verbose: bool) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    let mut order = insertion_order(m, &spec, &a.order)?;
    let mut stop_after = a.stop_after;
    if a.cstar {
        let (rows, prefix) = cstar_order(&spec);
        order = InsertionOrder::from_rows(OrderKind::Recursive, rows, spec.num_rows())?;
        m.order = Some("recursive (C* split)".into());
        stop_after = stop_after.or(Some(prefix));
    }
    let exclude = a.exclude.iter().map(|s| parse_row(&spec, s)).collect::<CliResult<Vec<_>>>()?;
    m.budgets.max_rays = a.max_rays;
    m.budgets.stop_after = stop_after;
    let opts = DdOptions {
        stop_after,
        max_rays: a.max_rays,
        exclude,
        adjacency: a.adjacency,
    };
    let cone = spec.cone::<N>();
    let run = run_dd_with(&cone, &order, &opts, |p, s| {
        if verbose {
            match s {
                Some(s) => eprintln!(
                    "step {:>4} row {:>4}: +{} 0{} -{} -> {} rays",
                    p.processed,
                    p.row.unwrap_or(0),
                    s.positive,
                    s.zero,
                    s.negative,
                    p.rays
                ),
                None => eprintln!("initial simplex: {} rows, {} rays", p.processed, p.rays),
            }
        }
    })?;
    save_rays(&a.out, run.state.rays(), spec.dim(), a.binary)?;
    m.output(&a.out);
    if let Some(p) = &a.trajectory {
        let mut w = create(p)?;
        fmt::write_trajectory(&run.trajectory, &mut w)?;
        w.flush()?;
        m.output(p);
    }
    if let Some(p) = &a.pair_out {
        let next_row = match (run.status, order.rows()) {
            (RunStatus::Complete, _) | (_, None) => None,
            (_, Some(rows)) => rows
                .iter()
                .find(|r| !run.processed.contains(r) && !opts.exclude.contains(r))
                .map(|&r| cone.row(r).to_vec()),
        };
        let pair = PairFile {
            dim: spec.dim(),
            rows: run.processed.iter().map(|&r| cone.row(r).to_vec()).collect(),
            rays: run.state.rays().to_vec(),
            next_row,
        };
        let mut w = create(p)?;
        fmt::write_pair(&pair, &mut w)?;
        w.flush()?;
        m.output(p);
    }
    if verbose {
        eprintln!("{} rays after {} rows ({:?})", run.state.len(), run.processed.len(), run.status);
    }
    Ok(match run.status {
        RunStatus::BudgetExhausted => Outcome::Partial(format!(
            "ray budget exceeded after {} rows ({} rays)",
            run.processed.len(),
            run.state.len()
        )),
        _ => Outcome::Complete,
    })
}

fn dd_step<N: Int>(a: &DdStepArgs, m: &mut RunManifest) -> CliResult<Outcome> {
    m.input(&a.input);
    let pair: PairFile<N> = fmt::read_pair(&read_all(&a.input)?[..])?;
    let row = pair
        .next_row
        .ok_or_else(|| Error::Malformed {
            line: 0,
            msg: "no row to insert after the rays".into(),
        })?;
    let state = DdState::from_pair(pair.dim, pair.rows, pair.rays)?;
    let (next, _) = state.step(&row, a.adjacency)?;
    let mut rows = next.rows().to_vec();
    if rows.len() == state.rows().len() {
        rows.push(row);
    }
    let out = PairFile {
        dim: pair.dim,
        rows,
        rays: next.into_rays(),
        next_row: None,
    };
    let mut w = create(&a.out)?;
    fmt::write_pair(&out, &mut w)?;
    w.flush()?;
    m.output(&a.out);
    Ok(Outcome::Complete)
}

fn neighbor_options(m: &mut RunManifest, a: &NeighborArgs) -> NeighborOptions {
    m.order = Some(a.order.to_string());
    m.seed = a.seed;
    m.budgets.max_rays = a.max_rays;
    NeighborOptions {
        depth: a.depth.max(1),
        max_rays: a.max_rays,
        adjacency: a.adjacency,
        order: a.order,
        seed: a.seed,
    }
}

fn neighbors<N: Int>(a: &NeighborsArgs, m: &mut RunManifest, verbose: bool) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    let opts = neighbor_options(m, &a.neighbor);
    m.input(&a.rays);
    let rays = load_rays::<N>(&a.rays, spec.dim())?;
    let group = a.canonical.then(|| SymmetryGroup::new(&spec));
    let mut all = Vec::new();
    let mut complete = true;
    for (k, r) in rays.iter().enumerate() {
        let nb = neighbor::neighbors(&spec, r, &opts)?;
        if verbose {
            eprintln!("ray {k}: {} neighbors", nb.rays.len());
        }
        complete &= nb.complete;
        all.extend(nb.rays);
    }
    if let Some(g) = &group {
        all = all.iter().map(|r| g.canonical(r)).collect::<Result<_, _>>()?;
    }
    all.sort_unstable();
    all.dedup();
    save_rays(&a.out, &all, spec.dim(), false)?;
    m.output(&a.out);
    Ok(if complete {
        Outcome::Complete
    } else {
        Outcome::Partial("ray budget exceeded in a neighbor cone".into())
    })
}

fn orbits<N: Int>(a: &OrbitsCommand, m: &mut RunManifest) -> CliResult<Outcome> {
    match a {
        OrbitsCommand::Canonicalize { cone, rays, out } => {
            let spec = spec_for(m, cone)?;
            m.input(rays);
            let rays = load_rays::<N>(rays, spec.dim())?;
            let records = SymmetryGroup::new(&spec).orbits_of(&rays, &spec)?;
            save_pool(out, &records)?;
            m.output(out);
        }
        OrbitsCommand::Expand {
            cone,
            pool,
            binary,
            out,
        } => {
            let spec = spec_for(m, cone)?;
            m.input(pool);
            let pool: Vec<(Ray<N>, _)> = fmt::read_pool(&read_all(pool)?[..])?;
            let group = SymmetryGroup::new(&spec);
            let mut all = Vec::new();
            for (r, _) in &pool {
                if r.dim() != spec.dim() {
                    return Err(Error::Dimension {
                        expected: spec.dim(),
                        found: r.dim(),
                    }
                    .into());
                }
                all.extend(group.orbit(r)?);
            }
            all.sort_unstable();
            all.dedup();
            save_rays(out, &all, spec.dim(), *binary)?;
            m.output(out);
        }
    }
    Ok(Outcome::Complete)
}

fn harvest<N: Int>(a: &HarvestArgs, m: &mut RunManifest, verbose: bool) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    let kind = if a.cstar { OrderKind::Recursive } else { a.order };
    if kind.is_dynamic() {
        return Err(CliError::Usage(format!("harvest needs a static order, not `{kind}`")));
    }
    m.order = Some(kind.to_string());
    m.seed = a.seed;
    let (order, stop_after) = if a.cstar {
        let (rows, prefix) = cstar_order(&spec);
        (InsertionOrder::from_rows(kind, rows, spec.num_rows())?, prefix)
    } else {
        let k = a.stop_after.expect("clap requires --stop-after without --cstar");
        (InsertionOrder::new(kind, &spec, a.seed), k)
    };
    let rows = order.rows().expect("static order").to_vec();
    m.budgets.stop_after = Some(stop_after);
    let cone = spec.cone::<N>();
    let opts = DdOptions {
        stop_after: Some(stop_after),
        adjacency: a.adjacency,
        ..DdOptions::default()
    };
    let run = run_dd_with(&cone, &order, &opts, |_, _| {})?;
    let remaining: Vec<usize> = rows.iter().copied().filter(|r| !run.processed.contains(r)).collect();
    let cut = if a.next_only { &remaining[..remaining.len().min(1)] } else { &remaining[..] };
    let hopts = HarvestOptions {
        assume_all_adjacent: a.cstar || a.assume_adjacent,
        adjacency: a.adjacency,
    };
    let mut found = Vec::new();
    for &r in cut {
        let rep = harvest_step(&run.state, cone.row(r), &cone, &hopts)?;
        if verbose {
            eprintln!(
                "row {} ({}): pairs {} prechecked {} nonnegative {} feasible {} kept {}",
                r,
                spec.triplet(r),
                rep.pairs,
                rep.prechecked,
                rep.nonnegative,
                rep.feasible,
                rep.rays.len()
            );
        }
        found.extend(rep.rays);
    }
    found.sort_unstable();
    found.dedup();
    eprintln!(
        "intermediate cone: {} rows, {} rays; harvested {} rays from {} rows",
        run.processed.len(),
        run.state.len(),
        found.len(),
        cut.len()
    );
    save_rays(&a.out, &found, spec.dim(), false)?;
    m.output(&a.out);
    Ok(Outcome::Complete)
}

fn write_histogram(m: &mut RunManifest, p: &Path, h: &Histogram) -> CliResult<()> {
    let mut w = create(p)?;
    h.write_csv(&mut w)?;
    w.flush()?;
    m.output(p);
    Ok(())
}

fn stats_cmd<N: Int>(a: &StatsArgs, m: &mut RunManifest) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    let mut records: Option<Vec<OrbitRecord<N>>> = None;
    let weights = if let Some(p) = &a.rays {
        m.input(p);
        let rays = load_rays::<N>(p, spec.dim())?;
        if a.orbits || a.sizes.is_some() {
            records = Some(SymmetryGroup::new(&spec).orbits_of(&rays, &spec)?);
        }
        stats::weight_histogram(&spec.cone::<N>(), &rays)?
    } else {
        let p = a.pool.as_ref().expect("clap requires --rays or --pool");
        m.input(p);
        let pool: Vec<(Ray<N>, Option<(usize, usize)>)> = fmt::read_pool(&read_all(p)?[..])?;
        let group = SymmetryGroup::new(&spec);
        let recs = pool
            .into_iter()
            .map(|(r, ann)| match ann {
                Some((size, weight)) => Ok(OrbitRecord {
                    canonical: r,
                    size,
                    weight,
                }),
                None => group.canonical_form(&r, &spec),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let h = stats::weight_histogram_of_orbits(&recs);
        records = Some(recs);
        h
    };
    let mut out = io::stdout().lock();
    writeln!(out, "rays: {}", weights.total())?;
    if let (Some(lo), Some(hi), Some(mean)) = (weights.min(), weights.max(), weights.mean()) {
        writeln!(out, "weight_min: {lo}")?;
        writeln!(out, "weight_max: {hi}")?;
        writeln!(out, "weight_mean: {mean:.3}")?;
    }
    if let Some(recs) = &records {
        let sizes = stats::orbit_size_histogram(recs);
        writeln!(out, "orbits: {}", recs.len())?;
        if let Some(mean) = sizes.mean() {
            writeln!(out, "mean_orbit_size: {mean:.3}")?;
        }
        if let Some(p) = &a.sizes {
            write_histogram(m, p, &sizes)?;
        }
    }
    if let Some(p) = &a.weights {
        write_histogram(m, p, &weights)?;
    }
    Ok(Outcome::Complete)
}

fn estimate<N: Int>(a: &EstimateArgs, m: &mut RunManifest) -> CliResult<Outcome> {
    let e = match (&a.pool_file, &a.probe_file) {
        (Some(pool), Some(probe)) => {
            m.input(pool);
            m.input(probe);
            let pool: Vec<(Ray<N>, Option<(usize, usize)>)> = fmt::read_pool(&read_all(pool)?[..])?;
            let probe: Vec<(Ray<N>, Option<(usize, usize)>)> = fmt::read_pool(&read_all(probe)?[..])?;
            let mean = a.mean_orbit_size.or_else(|| {
                let sizes: Option<Vec<usize>> = pool.iter().map(|(_, ann)| ann.map(|(s, _)| s)).collect();
                sizes.and_then(|s| s.into_iter().collect::<Histogram>().mean())
            });
            let set: HashSet<Ray<N>> = pool.into_iter().map(|(r, _)| r).collect();
            let probe: Vec<Ray<N>> = probe.into_iter().map(|(r, _)| r).collect();
            CaptureEstimate::from_sets(&set, &probe, mean)?
        }
        _ => CaptureEstimate::from_counts(
            a.pool.expect("clap requires --pool"),
            a.probe.expect("clap requires --probe"),
            a.overlap.expect("clap requires --overlap"),
            a.mean_orbit_size,
        )?,
    };
    let mut w = create(&a.out)?;
    write!(w, "{e}")?;
    w.flush()?;
    m.output(&a.out);
    Ok(Outcome::Complete)
}

fn verify<N: Int>(a: &VerifyArgs, m: &mut RunManifest) -> CliResult<Outcome> {
    use rayon::prelude::*;
    let spec = spec_for(m, &a.cone)?;
    m.input(&a.rays);
    let rays = load_rays::<N>(&a.rays, spec.dim())?;
    let cone = spec.cone::<N>();
    let ok: Vec<bool> = rays
        .par_iter()
        .map(|r| neighbor::verify_extremal(&cone, r))
        .collect::<Result<_, _>>()?;
    let rejected: Vec<usize> = (0..ok.len()).filter(|&k| !ok[k]).collect();
    let mut distinct = rays.clone();
    distinct.sort_unstable();
    distinct.dedup();
    println!("rays: {}", rays.len());
    println!("distinct: {}", distinct.len());
    println!("extremal: {}", rays.len() - rejected.len());
    println!("rejected: {}", rejected.len());
    Ok(match rejected.first() {
        None => Outcome::Complete,
        Some(k) => Outcome::Failed(format!("{} rays are not extremal (first: ray {})", rejected.len(), k + 1)),
    })
}

fn sample<N: Int>(a: &SampleArgs, m: &mut RunManifest) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    m.seed = Some(a.seed);
    let around = match &a.around {
        Some(p) => {
            m.input(p);
            let rays = load_rays::<N>(p, spec.dim())?;
            Some(rays.into_iter().next().ok_or_else(|| Error::Malformed {
                line: 0,
                msg: "no ray in the --around file".into(),
            })?)
        }
        None => None,
    };
    let rep = neighbor::random_extremal_sample(&spec.cone::<N>(), a.seed, a.attempts, around.as_ref())?;
    eprintln!("attempts: {} hits: {} distinct: {}", rep.attempts, rep.hits, rep.rays.len());
    save_rays(&a.out, &rep.rays, spec.dim(), false)?;
    m.output(&a.out);
    Ok(Outcome::Complete)
}

fn bfs<N: Int>(a: &BfsArgs, m: &mut RunManifest, verbose: bool) -> CliResult<Outcome> {
    let spec = spec_for(m, &a.cone)?;
    let neighbor = neighbor_options(m, &a.neighbor);
    m.budgets.max_probes = a.max_probes;
    m.budgets.max_weight = a.max_weight;
    let group = SymmetryGroup::new(&spec);
    let mut ledger = match &a.spill_dir {
        Some(dir) => OrbitLedger::spilling(spec.dim(), dir, a.spill_at)?,
        None => OrbitLedger::in_memory(spec.dim()),
    };

    // resume: everything in the pool is known, everything journaled is probed
    let probed: HashSet<Ray<N>> = if a.journal.exists() {
        m.input(&a.journal);
        ProbeJournal::read::<N>(&a.journal)?.into_iter().map(|e| e.canonical).collect()
    } else {
        HashSet::new()
    };
    let mut frontier = Vec::new();
    if a.pool.exists() {
        m.input(&a.pool);
        let pool: Vec<(Ray<N>, Option<(usize, usize)>)> = fmt::read_pool(BufReader::new(File::open(&a.pool)?))?;
        for (r, _) in pool {
            ledger.insert(r.clone())?;
            if !probed.contains(&r) {
                frontier.push(r);
            }
        }
    }
    if ledger.is_empty() {
        match &a.seeds {
            Some(p) => {
                m.input(p);
                frontier.extend(load_rays::<N>(p, spec.dim())?);
            }
            None => frontier.push(spec.f_j::<N>(0b11)?),
        }
    }
    let opts = BfsOptions {
        max_probes: a.max_probes,
        max_weight: a.max_weight,
        batch: a.batch,
        neighbor,
    };
    let mut journal = ProbeJournal::open(&a.journal)?;
    let rep = neighbor::orbit_bfs(&spec, &group, &mut ledger, frontier, &opts, |e| {
        if verbose {
            eprintln!("probe w={} neighbors={} new={}", e.weight, e.neighbors, e.new_orbits);
        }
        journal.append(e)
    })?;
    m.output(&a.journal);

    let canon = ledger.sorted()?;
    let records = {
        use rayon::prelude::*;
        let cone = spec.cone::<N>();
        canon
            .into_par_iter()
            .map(|c| {
                Ok(OrbitRecord {
                    size: group.orbit(&c)?.len(),
                    weight: cone.weight(c.coords())?,
                    canonical: c,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?
    };
    save_pool(&a.pool, &records)?;
    m.output(&a.pool);
    eprintln!(
        "orbits: {} probes: {} pending: {} closed: {}",
        records.len(),
        rep.probes + probed.len(),
        rep.pending.len(),
        rep.closed
    );
    Ok(if rep.closed {
        Outcome::Complete
    } else {
        Outcome::Partial(format!("{} orbits left unprobed", rep.pending.len()))
    })
}
