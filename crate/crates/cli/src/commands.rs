use std::fmt::Write as _;
use std::path::Path;

use lrc_core::bounds::{self, BoundReport, BoundsError, CSV_HEADER};
use lrc_core::construction::{build_matroid, certificate_of_config, params_of_config, validate_atom_config};
use lrc_core::graph::{self, build_theorem42_instance, graph_params, graph_to_atom_config, validate_graph_spec};
use lrc_core::lrc::is_perfect;
use lrc_core::matroid::{verify_rank_axioms, verify_z_axioms};
use lrc_core::oracle::{check_code_matroid_agreement, search_dmax, LinearCode, SearchError, SearchLimits};
use lrc_core::perfect::build_perfect_config;
use lrc_core::{AtomConfiguration, GraphError, GraphSpec, LrcParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::output::{read, write, Failure, Output};
use crate::{SearchArgs, Tuple};

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn from_bounds(e: BoundsError) -> Failure {
    match e {
        BoundsError::BadParams(_) => Failure::Usage(e.to_string()),
        _ => domain(e),
    }
}

fn from_graph(e: GraphError) -> Failure {
    match e {
        GraphError::Bounds(b) => from_bounds(b),
        _ => domain(e),
    }
}

fn from_search(e: SearchError) -> Failure {
    match e {
        SearchError::Bounds(b) => from_bounds(b),
        _ => domain(e),
    }
}

/// The tuple as `usize`, after the basic `0 < r ≤ k ≤ n`, `δ ≥ 2` check.
fn unsigned(t: Tuple) -> Result<(usize, usize, usize, usize), Failure> {
    bounds::check_basic(t.n, t.k, t.r, t.delta).map_err(from_bounds)?;
    Ok((t.n as usize, t.k as usize, t.r as usize, t.delta as usize))
}

pub fn bounds(t: Tuple, table: bool, wide: bool) -> Result<Output, Failure> {
    bounds::check_basic(t.n, t.k, t.r, t.delta).map_err(from_bounds)?;
    let (json, d_b, branch) = if wide {
        let b = BoundReport::<i128>::compute(t.n as i128, t.k as i128, t.r as i128, t.delta as i128)
            .map_err(from_bounds)?;
        (serde_json::to_value(b).expect("report serializes"), b.d_b.to_string(), b.branch)
    } else {
        let b = BoundReport::<i64>::compute(t.n, t.k, t.r, t.delta).map_err(from_bounds)?;
        (serde_json::to_value(b).expect("report serializes"), b.d_b.to_string(), b.branch)
    };
    let note = format!("d_b={d_b} {branch}");
    if !table {
        return Ok(Output::json(&json).note(note));
    }
    let mut body = String::new();
    for (key, value) in json.as_object().expect("report is an object") {
        let value = value.as_str().map_or_else(|| value.to_string(), str::to_owned);
        let _ = writeln!(body, "{key:<18} {value}");
    }
    Ok(Output { body, note: Some(note), failed: false })
}

fn params_line(p: &LrcParams) -> String {
    format!("{p} perfect={}", is_perfect(p))
}

pub fn build_perfect(t: Tuple) -> Result<Output, Failure> {
    let (n, k, r, delta) = unsigned(t)?;
    let cfg = build_perfect_config(n, k, r, delta).map_err(domain)?;
    let p = params_of_config(&cfg).map_err(domain)?;
    let out = json!({ "kind": "perfect", "config": cfg, "params": p, "perfect": is_perfect(&p) });
    Ok(Output::json(&out).note(params_line(&p)))
}

fn graph_output(kind: &str, g: &GraphSpec, dot: Option<&Path>) -> Result<Output, Failure> {
    let gp = graph_params(g).map_err(from_graph)?;
    let cfg = graph_to_atom_config(g).map_err(from_graph)?;
    let own = params_of_config(&cfg).map_err(domain)?;
    let p = LrcParams::new(own.n, own.k, own.d, g.r as usize, g.delta as usize).map_err(domain)?;
    if let Some(path) = dot {
        write(path, &graph::to_dot(g))?;
    }
    let mut out = json!({
        "kind": kind,
        "graph": g,
        "graph_params": { "n": gp.n, "d": gp.d },
        "config": cfg,
        "params": p,
        "config_params": own,
        "perfect": is_perfect(&p),
    });
    if kind == "theorem42" {
        let (d_b, branch) = bounds::theorem42_bound(gp.n, g.k, g.r, g.delta).map_err(from_bounds)?;
        out["bound"] = json!({ "d_b": d_b, "branch": branch });
    }
    Ok(Output::json(&out).note(params_line(&p)))
}

pub fn build_graph(spec: &Path, dot: Option<&Path>) -> Result<Output, Failure> {
    let text = read(spec)?;
    let g: GraphSpec =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", spec.display())))?;
    let report = validate_graph_spec(&g);
    if !report.passes() {
        let labels: Vec<_> = report.violations.iter().map(|v| v.to_string()).collect();
        let out = Output::json(&json!({ "valid": false, "violations": report.violations }));
        return Ok(Output { failed: true, ..out.note(format!("invalid graph spec: {}", labels.join("; "))) });
    }
    graph_output("graph", &g, dot)
}

pub fn build_theorem42(t: Tuple, dot: Option<&Path>) -> Result<Output, Failure> {
    bounds::check_basic(t.n, t.k, t.r, t.delta).map_err(from_bounds)?;
    let g = build_theorem42_instance(t.n, t.k, t.r, t.delta).map_err(from_graph)?;
    graph_output("theorem42", &g, dot)
}

pub fn analyze(path: &Path, verify_axioms: bool, dot: Option<&Path>, sweep_cap: usize) -> Result<Output, Failure> {
    let text = read(path)?;
    let cfg = AtomConfiguration::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let report = validate_atom_config(&cfg);
    if !report.passes() {
        let out = Output::json(&json!({ "valid": false, "violations": report.violations }));
        return Ok(Output { failed: true, ..out.note(format!("invalid configuration: {report}")) });
    }
    let p = params_of_config(&cfg).map_err(domain)?;
    let cert = certificate_of_config(&cfg).map_err(domain)?;
    let mut out = json!({ "valid": true, "params": p, "perfect": is_perfect(&p), "certificate": cert });
    let mut failed = false;
    if cfg.ground_size() <= lrc_core::subset::MAX_ELEMENTS {
        let m = build_matroid(&cfg).map_err(domain)?.with_sweep_cap(sweep_cap);
        let lattice = m.lattice().map_err(domain)?;
        let flats: Vec<_> =
            lattice.members().iter().map(|z| json!({ "elements": z.flat.to_vec(), "rank": z.rank })).collect();
        out["lattice"] = json!(flats);
        match dot {
            Some(path) => write(path, &lattice.to_dot())?,
            None => out["dot"] = json!(lattice.to_dot()),
        }
        if verify_axioms {
            let rank = verify_rank_axioms(&m).map_err(domain)?;
            let z = verify_z_axioms(cfg.ground_size(), &lattice.to_pairs());
            failed = !rank.passes() || !z.passes();
            out["axioms"] = json!({ "rank": rank, "z": z });
        }
    } else if verify_axioms {
        return Err(domain(format!("axiom checks need n ≤ {}", lrc_core::subset::MAX_ELEMENTS)));
    }
    Ok(Output { failed, ..Output::json(&out).note(params_line(&p)) })
}

fn limits(args: SearchArgs) -> SearchLimits {
    SearchLimits { max_n: args.max_n, general: args.general, relaxed: args.relaxed, max_configs: args.max_configs }
}

pub fn search(t: Tuple, args: SearchArgs) -> Result<Output, Failure> {
    let (n, k, r, delta) = unsigned(t)?;
    let result = search_dmax(n, k, r, delta, limits(args)).map_err(from_search)?;
    let mut out = json!({ "result": result });
    let mut note = format!("best_d={} perfect={}", result.best_d, result.perfect);
    let mut failed = false;
    if let Ok((d_b, branch)) = bounds::theorem42_bound(t.n, t.k, t.r, t.delta) {
        let best = result.best_d as i64;
        let within = result.perfect || best <= d_b;
        let tight = !result.perfect && best == d_b;
        failed = !within;
        out["bound"] = json!({ "d_b": d_b, "branch": branch, "within_bound": within, "tight": tight });
        let _ = write!(note, " d_b={d_b} {}", if tight { "tight" } else if within { "within" } else { "VIOLATED" });
    }
    Ok(Output { failed, ..Output::json(&out).note(note) })
}

pub struct GridRanges {
    pub n: (i64, i64),
    pub k: Option<(i64, i64)>,
    pub r: Option<(i64, i64)>,
    pub delta: Option<(i64, i64)>,
}

impl GridRanges {
    fn tuples(&self) -> Vec<(i64, i64, i64, i64)> {
        let clip = |range: Option<(i64, i64)>, lo: i64, hi: i64| {
            let (a, b) = range.unwrap_or((lo, hi));
            a.max(lo)..=b.min(hi)
        };
        let mut out = Vec::new();
        for n in self.n.0.max(1)..=self.n.1 {
            for k in clip(self.k, 2, n) {
                for r in clip(self.r, 1, k - 1) {
                    for delta in clip(self.delta, 2, n) {
                        out.push((n, k, r, delta));
                    }
                }
            }
        }
        out
    }
}

pub fn grid(ranges: GridRanges, search: Option<SearchArgs>, workers: usize) -> Result<Output, Failure> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(domain)?;
    let tuples = ranges.tuples();
    let rows: Vec<(String, bool)> = pool.install(|| {
        tuples
            .par_iter()
            .filter_map(|&(n, k, r, delta)| {
                let report = BoundReport::<i64>::compute(n, k, r, delta).ok()?;
                let mut row = report.csv_row();
                let mut violation = false;
                if let Some(args) = search {
                    match search_dmax(n as usize, k as usize, r as usize, delta as usize, limits(args)) {
                        Ok(s) => {
                            let within = s.perfect || s.best_d as i64 <= report.d_b;
                            violation = !within;
                            let _ = write!(row, ",{},{},{}", s.best_d, s.perfect, within);
                        }
                        Err(_) => row.push_str(",,,"),
                    }
                }
                Some((row, violation))
            })
            .collect()
    });
    let mut body = String::from(CSV_HEADER);
    if search.is_some() {
        body.push_str(",best_d,perfect,within_bound");
    }
    body.push('\n');
    for (row, _) in &rows {
        body.push_str(row);
        body.push('\n');
    }
    let violations = rows.iter().filter(|(_, v)| *v).count();
    Ok(Output { body, note: Some(format!("{} rows, {violations} with d > d_b", rows.len())), failed: violations > 0 })
}

fn parse_code(text: &str, q: Option<usize>) -> Result<LinearCode, Failure> {
    LinearCode::from_json(text, q)
        .or_else(|e| match q {
            Some(q) => LinearCode::from_text(q, text),
            None => Err(e),
        })
        .map_err(|e| Failure::Usage(e.to_string()))
}

pub fn oracle_file(path: &Path, q: Option<usize>, r: usize, delta: usize) -> Result<Output, Failure> {
    let code = parse_code(&read(path)?, q)?;
    let report = check_code_matroid_agreement(&code, r, delta).map_err(domain)?;
    let note = format!(
        "code d={} matroid d={:?} agree={}",
        report.code_distance,
        report.matroid_distance,
        report.agrees()
    );
    Ok(Output { failed: !report.agrees(), ..Output::json(&report).note(note) })
}

pub struct RandomCodes {
    pub count: usize,
    pub seed: u64,
    pub q: Option<usize>,
    pub max_n: usize,
    pub max_k: usize,
}

pub fn oracle_random(opts: RandomCodes, r: usize, delta: usize) -> Result<Output, Failure> {
    if opts.max_n < 1 || opts.max_k < 1 {
        return Err(Failure::Usage("--max-n and --max-k must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut disagreements = Vec::new();
    for i in 0..opts.count {
        let q = opts.q.unwrap_or([2, 3][i % 2]);
        let n = rng.gen_range(1..=opts.max_n);
        let k = rng.gen_range(1..=opts.max_k.min(n));
        let code = LinearCode::random(q, k, n, &mut rng).map_err(|e| Failure::Usage(e.to_string()))?;
        let report = check_code_matroid_agreement(&code, r, delta).map_err(domain)?;
        if !report.agrees() {
            disagreements.push(json!({ "code": serde_json::from_str::<serde_json::Value>(&code.to_json()).expect("code JSON"), "report": report }));
        }
    }
    let agreed = opts.count - disagreements.len();
    let out = json!({ "seed": opts.seed, "count": opts.count, "agreed": agreed, "disagreements": disagreements });
    let note = format!("{agreed}/{} agree", opts.count);
    Ok(Output { failed: agreed < opts.count, ..Output::json(&out).note(note) })
}
