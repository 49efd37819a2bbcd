//! `spectral-lab`: build H_2n, inspect spectra, run swap descents, certify
//! small orders exhaustively and tabulate the asymptotic sandwich.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use spectral_lab::cache::{cached_records, sha256_hex, Cache};
use spectral_lab::descent::{descend, random_cubic_bipartite, DescentTrace, DEFAULT_TIE_TOL};
use spectral_lab::enumeration::{certify_equivalence_records, certify_minimizer_records, records_to_csv, TIE_TOL};
use spectral_lab::spectral::{algebraic_connectivity, path_fiedler_closed_form, spectral_gap};
use spectral_lab::{build_h2n, canonical_form, decode_graph6, BipartiteGraph, Graph};

#[derive(Parser, Debug)]
#[command(name = "spectral-lab", version, about = "Algebraic connectivity of cubic bipartite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the extremal graph H_2n.
    Construct(ConstructArgs),
    /// Algebraic connectivity, spectral gap and Fiedler vector of a graph.
    Spectrum(SpectrumArgs),
    /// Swap descents from random connected cubic bipartite graphs.
    Descend(DescendArgs),
    /// Exhaustive minimizer and matching certification for one order.
    Certify(CertifyArgs),
    /// Table of a(H_2n) against the path bounds.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Graph6,
    Json,
    Csv,
    Jsonl,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Graph6 => "graph6",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
            Format::Text => "text",
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Part size; H_2n has 2n vertices.
    #[arg(long, value_parser = clap::value_parser!(u64).range(6..))]
    n: u64,
    #[arg(long, value_enum, default_value = "graph6")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// graph6 or JSON edge-list file; stdin when absent or "-".
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Allowed |gap - a| for regular inputs.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DescendArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// A step must lower a(G) by more than this.
    #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
    tolerance: f64,
    #[arg(long)]
    workers: Option<usize>,
    /// Permit n > 12.
    #[arg(long)]
    allow_slow: bool,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    /// Values of a(G) closer than this count as tied.
    #[arg(long, default_value_t = TIE_TOL)]
    tolerance: f64,
    #[arg(long)]
    workers: Option<usize>,
    /// Permit n = 8.
    #[arg(long)]
    allow_slow: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// CSV of all classes; defaults to classes_n<N>.csv (in the cache
    /// directory when SPECTRAL_LAB_CACHE is set).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AsymptoticsArgs {
    /// Largest n in the table.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(6..=500))]
    n: u64,
    /// Slack on the path bounds.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

type CliResult = Result<ExitCode, String>;

fn usage(msg: impl Into<String>) -> String {
    msg.into()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(usage("--workers must be at least 1"));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| e.to_string())
}

fn cmd_construct(a: ConstructArgs) -> CliResult {
    let g = build_h2n(a.n as usize).map_err(|e| e.to_string())?;
    let text = match a.format {
        Format::Graph6 => g.to_graph6() + "\n",
        Format::Json => g.to_json() + "\n",
        f => return Err(usage(format!("construct supports graph6 or json, not {}", f.name()))),
    };
    // graph formats carry no header, so the config goes to stderr
    eprintln!("# spectral-lab construct n={} format={}", a.n, a.format.name());
    emit(&a.output.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn read_input(path: &Option<PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            Ok(s)
        }
    }
}

/// Parses a JSON edge list or a single graph6 line.
fn parse_graph(text: &str) -> Result<(Graph, Option<BipartiteGraph>), String> {
    let t = text.trim();
    if t.starts_with('{') {
        let b = BipartiteGraph::from_json(t).map_err(|e| format!("bad JSON edge list: {e}"))?;
        Ok((b.to_graph(), Some(b)))
    } else {
        let line = t.lines().next().unwrap_or("");
        let g = decode_graph6(line).map_err(|e| format!("bad graph6: {e}"))?;
        let b = BipartiteGraph::from_graph(&g).ok();
        Ok((g, b))
    }
}

fn cmd_spectrum(a: SpectrumArgs) -> CliResult {
    let (g, bip) = parse_graph(&read_input(&a.input)?)?;
    if g.vertex_count() < 2 {
        return Err(usage("spectrum needs at least 2 vertices"));
    }
    let s = algebraic_connectivity(&g).map_err(|e| e.to_string())?;
    let regular = g.regular_degree();
    let gap = if regular.is_some() { Some(spectral_gap(&g).map_err(|e| e.to_string())?) } else { None };
    let gap_diff = gap.map(|x| (x - s.value).abs());
    let gap_ok = gap_diff.is_none_or(|d| d <= a.tolerance);
    // the path bounds of H_2n, reported for cubic bipartite inputs with n >= 6
    let sandwich = bip.filter(|b| b.is_cubic() && b.n_left() == b.n_right() && b.n_left() >= 6).map(|b| {
        let n = b.n_left();
        let lo = path_fiedler_closed_form(n).unwrap();
        let hi = path_fiedler_closed_form(n - 4).unwrap();
        (n, lo, hi, lo - 1e-9 <= s.value && s.value <= hi + 1e-9)
    });
    let connected = g.is_connected();
    let config = json!({"command": "spectrum", "format": a.format.name(), "tolerance": a.tolerance});
    let text = match a.format {
        Format::Json => {
            let doc = json!({
                "config": config,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "connected": connected,
                "a": s.value,
                "multiplicity": s.multiplicity,
                "residual": s.residual,
                "regular_degree": regular,
                "spectral_gap": gap,
                "gap_minus_a": gap_diff,
                "gap_ok": gap_ok,
                "sandwich": sandwich.map(|(n, lo, hi, ok)| json!({"n": n, "a_path_n": lo, "a_path_n_minus_4": hi, "ok": ok})),
                "fiedler_vector": s.vector,
            });
            serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n"
        }
        Format::Text => {
            let mut t = format!("# spectral-lab {config}\n");
            t += &format!("vertices      {}\nedges         {}\n", g.vertex_count(), g.edge_count());
            t += &format!("connected     {connected}{}\n", if connected { "" } else { " (a = 0)" });
            t += &format!("a(G)          {:.9}\nmultiplicity  {}\nresidual      {:.2e}\n", s.value, s.multiplicity, s.residual);
            if let (Some(k), Some(gap), Some(d)) = (regular, gap, gap_diff) {
                t += &format!("regular       degree {k}\nspectral gap  {gap:.9}\n|gap - a|     {d:.2e} ({})\n", if gap_ok { "ok" } else { "FAIL" });
            }
            if let Some((n, lo, hi, ok)) = sandwich {
                t += &format!("sandwich      a(P_{n}) = {lo:.9} <= a <= a(P_{}) = {hi:.9}: {}\n", n - 4, if ok { "holds" } else { "violated" });
            }
            let v: Vec<String> = s.vector.iter().map(|x| format!("{x:.9}")).collect();
            t += &format!("fiedler       {}\n", v.join(" "));
            t
        }
        f => return Err(usage(format!("spectrum supports text or json, not {}", f.name()))),
    };
    emit(&a.output.out, &text)?;
    Ok(if gap_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_descend(a: DescendArgs) -> CliResult {
    if a.n < 3 {
        return Err(usage("descend needs n >= 3"));
    }
    if a.n > 12 && !a.allow_slow {
        return Err(usage(format!("n = {} exceeds the default budget (n <= 12); pass --allow-slow", a.n)));
    }
    if a.format != Format::Jsonl {
        return Err(usage("descend writes JSON lines only (--format jsonl)"));
    }
    let pool = pool(a.workers)?;
    let traces: Vec<Result<DescentTrace, String>> = pool.install(|| {
        (0..a.seeds)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(a.seed.wrapping_add(i as u64));
                let g = random_cubic_bipartite(a.n, &mut rng).map_err(|e| e.to_string())?;
                descend(&g, a.max_iter, a.tolerance).map_err(|e| e.to_string())
            })
            .collect()
    });
    let traces: Vec<DescentTrace> = traces.into_iter().collect::<Result<_, _>>()?;
    let h2n = if a.n >= 6 {
        let g = build_h2n(a.n).map_err(|e| e.to_string())?;
        Some((algebraic_connectivity(&g.to_graph()).map_err(|e| e.to_string())?.value, canonical_form(&g).map_err(|e| e.to_string())?))
    } else {
        None
    };
    let config = json!({
        "command": "descend", "n": a.n, "seeds": a.seeds, "seed": a.seed, "max_iter": a.max_iter,
        "tolerance": a.tolerance, "workers": a.workers, "format": a.format.name(),
    });
    let mut out = json!({"config": config}).to_string() + "\n";
    let mut finals: Vec<f64> = Vec::new();
    let mut reached = 0;
    for (i, t) in traces.iter().enumerate() {
        for (k, s) in t.steps.iter().enumerate() {
            out += &(json!({"seed_index": i, "step": k, "graph6": s.graph6, "a": s.a_value, "swap": s.swap}).to_string() + "\n");
        }
        out += &(json!({"seed_index": i, "terminal_reason": t.terminal_reason.to_string(), "steps": t.steps.len(), "final_a": t.final_value()}).to_string() + "\n");
        finals.push(t.final_value());
        if let Some((_, form)) = &h2n {
            let g = t.final_graph().map_err(|e| e.to_string())?;
            if canonical_form(&g).map_err(|e| e.to_string())? == *form {
                reached += 1;
            }
        }
    }
    // histogram of terminal values, merged within 1e-9
    let mut sorted = finals.clone();
    sorted.sort_by(f64::total_cmp);
    let mut hist: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match hist.last_mut() {
            Some((w, c)) if (v - *w).abs() <= 1e-9 => *c += 1,
            _ => hist.push((v, 1)),
        }
    }
    let a_h2n = h2n.as_ref().map(|(v, _)| *v);
    let below = a_h2n.map(|m| finals.iter().filter(|&&v| v < m - 1e-9).count());
    let histogram: Vec<_> = hist
        .iter()
        .map(|&(v, c)| json!({"final_a": v, "count": c, "excess_over_h2n": a_h2n.map(|m| v - m)}))
        .collect();
    out += &(json!({"summary": {"runs": traces.len(), "a_h2n": a_h2n, "reached_h2n": h2n.as_ref().map(|_| reached), "below_h2n": below, "histogram": histogram}}).to_string() + "\n");
    emit(&a.output.out, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(a: CertifyArgs) -> CliResult {
    match a.n {
        3..=7 => {}
        8 if a.allow_slow => {}
        8 => return Err(usage("n = 8 needs --allow-slow")),
        n => return Err(usage(format!("certify supports 3 <= n <= 8, got {n}"))),
    }
    let cache = Cache::from_env().map_err(|e| e.to_string())?;
    let records = pool(a.workers)?.install(|| cached_records(a.n, cache.as_ref())).map_err(|e| e.to_string())?;
    let minimizer = certify_minimizer_records(a.n, &records, a.tolerance).map_err(|e| e.to_string())?;
    let equivalence = certify_equivalence_records(a.n, &records, a.tolerance).map_err(|e| e.to_string())?;
    let csv = records_to_csv(&records);
    let csv_path = match (&a.out, &cache) {
        (Some(p), _) => p.clone(),
        (None, Some(c)) => c.dir().join(format!("classes_n{}.csv", a.n)),
        (None, None) => PathBuf::from(format!("classes_n{}.csv", a.n)),
    };
    match (&a.out, &cache) {
        (None, Some(c)) => {
            c.store(&format!("classes_n{}.csv", a.n), csv.as_bytes()).map_err(|e| e.to_string())?;
        }
        _ => fs::write(&csv_path, &csv).map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?,
    }
    let config = json!({"command": "certify", "n": a.n, "tolerance": a.tolerance, "workers": a.workers, "allow_slow": a.allow_slow, "format": a.format.name()});
    let verdict = |pass: bool, asserted: bool| match (pass, asserted) {
        (true, true) => "PASS",
        (false, _) => "FAIL",
        (true, false) => "PASS (report only; asserted for n >= 6)",
    };
    let text = match a.format {
        Format::Json => {
            let doc = json!({"config": config, "minimizer": minimizer, "equivalence": equivalence, "classes_csv": csv_path, "csv_sha256": sha256_hex(csv.as_bytes())});
            serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n"
        }
        Format::Text => {
            let mut t = format!("# spectral-lab {config}\n");
            t += &format!("classes: {} connected cubic bipartite graphs on {}+{} vertices\n", minimizer.class_count, a.n, a.n);
            t += &format!(
                "minimizer:   {} min a = {:.9} by {:?}; runner-up gap {}\n",
                verdict(minimizer.pass, minimizer.asserted),
                minimizer.min_a,
                minimizer.argmin,
                minimizer.runner_up_gap.map_or("n/a".into(), |g| format!("{g:.9}"))
            );
            t += &format!(
                "equivalence: {} max perfect matchings {} by {:?}; argmin a {:?}\n",
                verdict(equivalence.pass, equivalence.asserted),
                equivalence.max_pm,
                equivalence.argmax_pm,
                equivalence.argmin_a
            );
            t += &format!("classes csv: {} (sha256 {})\n", csv_path.display(), sha256_hex(csv.as_bytes()));
            t
        }
        f => return Err(usage(format!("certify reports text or json, not {}", f.name()))),
    };
    io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(if minimizer.pass && equivalence.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_asymptotics(a: AsymptoticsArgs) -> CliResult {
    if a.format != Format::Csv {
        return Err(usage("asymptotics writes CSV only (--format csv)"));
    }
    let n_max = a.n as usize;
    let rows: Vec<Result<(usize, f64), String>> = pool(a.workers)?.install(|| {
        (6..=n_max)
            .into_par_iter()
            .map(|n| {
                let g = build_h2n(n).map_err(|e| e.to_string())?;
                Ok((n, algebraic_connectivity(&g.to_graph()).map_err(|e| e.to_string())?.value))
            })
            .collect()
    });
    let config = json!({"command": "asymptotics", "n": n_max, "tolerance": a.tolerance, "workers": a.workers, "format": "csv"});
    let mut out = format!("# spectral-lab {config}\nn,a_h2n,a_pn,a_pn_minus_4,ratio,sandwich_ok\n");
    let mut all_ok = true;
    for row in rows {
        let (n, a_h) = row?;
        let lo = path_fiedler_closed_form(n).unwrap();
        let hi = path_fiedler_closed_form(n - 4).unwrap();
        let ok = lo - a.tolerance <= a_h && a_h <= hi + a.tolerance;
        all_ok &= ok;
        let ratio = (n * n) as f64 * a_h / (std::f64::consts::PI * std::f64::consts::PI);
        out += &format!("{n},{a_h:.15e},{lo:.15e},{hi:.15e},{ratio:.12},{ok}\n");
    }
    emit(&a.output.out, &out)?;
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Descend(a) => cmd_descend(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Asymptotics(a) => cmd_asymptotics(a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
