//! Command-line front end. `run` is pure apart from file reads, so tests can
//! drive it in-process and compare captured output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::behavior::{blocking_markings, BehaviorError};
use crate::gen::{gen_block_wf, gen_small_random, GenError, GenParams};
use crate::io::{analyze, read_net, write_lpn, AnalysisReport, ReadError};
use crate::marking::Marking;
use crate::net::{cluster_of, clusters, Node, PetriNet};
use crate::par;
use crate::state_space::{explore, Exploration, ExploreError, Limits};
use crate::structure::{
    check_soundness, classify, p_components, q_projection, short_circuit, t_components, ComponentSet,
    SoundnessDiagnosis, StructureError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pnstruct", version, about = "Structure-theory analysis of place/transition Petri nets")]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Stop exploring after this many reachable markings.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full report: structure, behaviour and witnesses.
    Analyze { file: PathBuf },
    /// Decide one property; exit 0 if it holds, 1 if not.
    Check { prop: Property, file: PathBuf },
    /// List P- or T-components.
    Components {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::P)]
        kind: KindArg,
    },
    /// Blocking markings of the cluster containing NODE.
    Blocking {
        file: PathBuf,
        #[arg(long, value_name = "NODE")]
        cluster: String,
    },
    /// Subnet generated by the chosen P-components (indices as listed by `components`).
    Project {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        components: Vec<usize>,
    },
    /// Add t_star from sink to source of a workflow net.
    ShortCircuit { file: PathBuf },
    /// One summary row per net file in DIR.
    Table { dir: PathBuf },
    /// Print a generated net.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        size: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    FreeChoice,
    PNet,
    TNet,
    StronglyConnected,
    Workflow,
    Live,
    Bounded,
    Safe,
    LocallySafe,
    Cyclic,
    Sound,
    Perpetual,
    #[value(alias = "lucency")]
    Lucent,
    PCover,
    TCover,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    P,
    T,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Wf,
    Random,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Limit(_) => EXIT_LIMIT,
            _ => EXIT_USAGE,
        }
    }
}

impl From<ExploreError> for CliError {
    fn from(e: ExploreError) -> Self {
        match e {
            ExploreError::LimitExceeded { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::CapExceeded { .. } | StructureError::ComponentLimitExceeded { .. } => {
                CliError::Limit(e.to_string())
            }
            StructureError::Explore(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BehaviorError> for CliError {
    fn from(e: BehaviorError) -> Self {
        match e {
            BehaviorError::Explore(inner) => inner.into(),
            BehaviorError::Structure(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Output { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let limits = Limits::with_states(usize::try_from(cli.max_states).unwrap_or(usize::MAX));
    match dispatch(&cli, limits) {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(e) => Output { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(cli: &Cli, limits: Limits) -> Result<(i32, String), CliError> {
    match &cli.command {
        Command::Analyze { file } => {
            let (net, m0) = read_net(file)?;
            let r = analyze(&net, &m0, limits);
            let code = if r.reachable_marking_count.is_none() && r.bounded.is_none() { EXIT_LIMIT } else { EXIT_OK };
            Ok((code, if cli.json { r.to_json() + "\n" } else { human_report(&r) }))
        }
        Command::Check { prop, file } => {
            let (net, m0) = read_net(file)?;
            let (holds, witness) = check(*prop, &net, &m0, limits)?;
            let name = prop.to_possible_value().expect("no skipped variants").get_name().to_string();
            let code = match holds {
                Some(true) => EXIT_OK,
                Some(false) => EXIT_FAILS,
                None => EXIT_LIMIT,
            };
            let text = if cli.json {
                pretty(&json!({ "property": name, "holds": holds, "witness": witness.json }))
            } else {
                let verdict = match holds {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "undecided",
                };
                let mut s = format!("{name}: {verdict}\n");
                for line in &witness.lines {
                    s += &format!("  {line}\n");
                }
                s
            };
            Ok((code, text))
        }
        Command::Components { file, kind } => {
            let (net, _) = read_net(file)?;
            let comps = match kind {
                KindArg::P => p_components(&net)?,
                KindArg::T => t_components(&net)?,
            };
            let text = if cli.json {
                let items: Vec<Value> = comps.iter().enumerate().map(|(i, c)| component_json(&net, i, c)).collect();
                pretty(&Value::Array(items))
            } else {
                comps.iter().enumerate().map(|(i, c)| format!("{i}: {}\n", c.show(&net))).collect()
            };
            Ok((EXIT_OK, text))
        }
        Command::Blocking { file, cluster } => {
            let (net, m0) = read_net(file)?;
            let node = net.node(cluster).map_err(|e| CliError::Usage(e.to_string()))?;
            let cs = clusters(&net);
            let c = &cs[cluster_of(&cs, node).expect("clusters partition the nodes")];
            let b = blocking_markings(&net, &m0, c, limits)?;
            let avoid = |a: &Option<Vec<usize>>| a.as_ref().map(|s| net.show_sequence(s));
            let text = if cli.json {
                let ms: Vec<Value> = b
                    .markings
                    .iter()
                    .zip(&b.avoidance)
                    .map(|(m, a)| json!({ "marking": net.show(m), "avoiding_sequence": avoid(a) }))
                    .collect();
                pretty(&json!({ "cluster": c.show(&net), "blocking_markings": ms }))
            } else {
                let mut s = format!("cluster {}: {} blocking marking(s)\n", c.show(&net), b.markings.len());
                for (m, a) in b.markings.iter().zip(&b.avoidance) {
                    let via = avoid(a).unwrap_or_else(|| "unreachable without the cluster".into());
                    s += &format!("  {} via {via}\n", net.show(m));
                }
                s
            };
            Ok((EXIT_OK, text))
        }
        Command::Project { file, components } => {
            let (net, m0) = read_net(file)?;
            let all = p_components(&net)?;
            let mut chosen = Vec::new();
            for &i in components {
                let c = all
                    .get(i)
                    .ok_or_else(|| CliError::Usage(format!("no P-component {i}; the net has {}", all.len())))?;
                chosen.push(c.clone());
            }
            let q = q_projection(&net, &m0, &chosen)?;
            let lpn = write_lpn(&q.net, &q.marking);
            let text = if cli.json {
                pretty(&json!({ "nodes": net.show_nodes(&q.nodes), "marking": q.net.show(&q.marking), "lpn": lpn }))
            } else {
                lpn
            };
            Ok((EXIT_OK, text))
        }
        Command::ShortCircuit { file } => {
            let (net, _) = read_net(file)?;
            let (closed, m) = short_circuit(&net)?;
            let lpn = write_lpn(&closed, &m);
            Ok((EXIT_OK, if cli.json { pretty(&json!({ "lpn": lpn })) } else { lpn }))
        }
        Command::Table { dir } => table(dir, limits, cli.json),
        Command::Gen { kind, seed, size } => {
            let params = GenParams::new(*seed, *size);
            let (net, m) = match kind {
                GenKind::Wf => gen_block_wf(&params)?,
                GenKind::Random => gen_small_random(&params)?,
            };
            let lpn = write_lpn(&net, &m);
            Ok((EXIT_OK, if cli.json { pretty(&json!({ "lpn": lpn })) } else { lpn }))
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn component_json(net: &PetriNet, index: usize, c: &ComponentSet) -> Value {
    json!({
        "index": index,
        "places": c.places.iter().map(|&p| net.place_name(p)).collect::<Vec<_>>(),
        "transitions": c.transitions.iter().map(|&t| net.transition_name(t)).collect::<Vec<_>>(),
    })
}

#[derive(Default)]
struct Witness {
    lines: Vec<String>,
    json: Value,
}

impl Witness {
    fn say(line: impl Into<String>, json: Value) -> Self {
        Witness { lines: vec![line.into()], json }
    }
}

fn check(prop: Property, net: &PetriNet, m0: &Marking, limits: Limits) -> Result<(Option<bool>, Witness), CliError> {
    let cls = classify(net);
    let nt = net.transition_count();
    let np = net.place_count();
    let none = Witness::default;
    let structural = |holds: bool, w: Option<Witness>| Ok((Some(holds), w.filter(|_| !holds).unwrap_or_default()));
    match prop {
        Property::FreeChoice => {
            let pair = (0..nt).flat_map(|a| (a + 1..nt).map(move |b| (a, b))).find(|&(a, b)| {
                let (x, y) = (net.pre_t(a), net.pre_t(b));
                x != y && x.iter().any(|p| y.contains(p))
            });
            let w = pair.map(|(a, b)| {
                let (ta, tb) = (net.transition_name(a), net.transition_name(b));
                Witness::say(
                    format!("{ta} and {tb} have overlapping but different pre-sets"),
                    json!({ "transitions": [ta, tb] }),
                )
            });
            structural(cls.is_free_choice, w)
        }
        Property::PNet => {
            let t = (0..nt).find(|&t| net.pre_t(t).len() != 1 || net.post_t(t).len() != 1);
            let w = t.map(|t| {
                let id = net.transition_name(t);
                Witness::say(
                    format!("{id} does not have exactly one input and one output place"),
                    json!({ "transition": id }),
                )
            });
            structural(cls.is_p_net, w)
        }
        Property::TNet => {
            let p = (0..np).find(|&p| net.pre_p(p).len() != 1 || net.post_p(p).len() != 1);
            let w = p.map(|p| {
                let id = net.place_name(p);
                Witness::say(
                    format!("{id} does not have exactly one input and one output transition"),
                    json!({ "place": id }),
                )
            });
            structural(cls.is_t_net, w)
        }
        Property::StronglyConnected => structural(cls.is_strongly_connected, None),
        Property::Workflow => {
            let w = cls.workflow.map(|(i, o)| {
                let (i, o) = (net.place_name(i), net.place_name(o));
                Witness::say(format!("source {i}, sink {o}"), json!({ "source": i, "sink": o }))
            });
            Ok((Some(cls.workflow.is_some()), w.unwrap_or_default()))
        }
        Property::Cyclic => match explore(net, m0, limits) {
            Exploration::Complete(g) => {
                let home = g.home_nodes();
                if home.contains(&g.initial()) {
                    return Ok((Some(true), none()));
                }
                let stuck = g
                    .bottom_sccs()
                    .into_iter()
                    .find(|s| !s.contains(&g.initial()))
                    .map(|s| s[0])
                    .expect("initial marking outside some bottom component");
                let m = net.show(g.marking(stuck));
                Ok((
                    Some(false),
                    Witness::say(format!("the initial marking is not reachable from {m}"), json!({ "marking": m })),
                ))
            }
            Exploration::Unbounded(w) => Ok((
                Some(false),
                Witness::say(
                    "unbounded: infinitely many reachable markings",
                    json!({ "unbounded": pump_json(net, &w) }),
                ),
            )),
            Exploration::LimitExceeded { states, edges } => Err(ExploreError::LimitExceeded { states, edges }.into()),
        },
        Property::Sound => {
            if cls.workflow.is_none() {
                return Ok((
                    Some(false),
                    Witness::say("not a workflow net", json!({ "reason": "not a workflow net" })),
                ));
            }
            let s = check_soundness(net, limits)?;
            let sc = &s.short_circuited;
            let w = match &s.diagnosis {
                SoundnessDiagnosis::Sound => none(),
                SoundnessDiagnosis::NotLive { marking, transition } => {
                    let (m, t) = (sc.show(marking), sc.transition_name(*transition));
                    Witness::say(
                        format!("short-circuited net is not live: {t} can never fire again after {m}"),
                        json!({ "marking": m, "transition": t }),
                    )
                }
                SoundnessDiagnosis::Unbounded(w) => Witness::say(
                    format!("short-circuited net is unbounded: {}", pump_line(sc, w)),
                    json!({ "unbounded": pump_json(sc, w) }),
                ),
            };
            Ok((Some(s.sound), w))
        }
        _ => {
            let r = analyze(net, m0, limits);
            if r.bounded.is_none() {
                let reason = r.warnings.join("; ");
                return Err(CliError::Limit(reason));
            }
            Ok(from_report(prop, net, &r))
        }
    }
}

fn pump_line(net: &PetriNet, w: &crate::state_space::PumpWitness) -> String {
    format!(
        "{} reaches {}, then {} reaches {}",
        net.show_sequence(&w.prefix),
        net.show(&w.m1),
        net.show_sequence(&w.pump),
        net.show(&w.m2)
    )
}

fn pump_json(net: &PetriNet, w: &crate::state_space::PumpWitness) -> Value {
    serde_json::to_value(crate::io::report::PumpView::new(net, w)).expect("serializable")
}

fn from_report(prop: Property, net: &PetriNet, r: &AnalysisReport) -> (Option<bool>, Witness) {
    let d = &r.details;
    let unbounded = || {
        d.unbounded_witness.as_ref().map(|p| {
            Witness::say(
                format!("unbounded: {} reaches {}, then {} reaches {}", p.prefix, p.from, p.pump, p.to),
                json!({ "unbounded": p }),
            )
        })
    };
    let (holds, w) = match prop {
        Property::Live => (
            r.live,
            d.liveness_witness.as_ref().map(|l| {
                Witness::say(format!("{} can never fire again after {}", l.transition, l.marking), to_value(l))
            }),
        ),
        Property::Bounded => (r.bounded, unbounded()),
        Property::Safe => {
            let over = d.place_bounds.iter().find(|b| b.max_tokens > 1);
            let w = over
                .map(|b| Witness::say(format!("{} can hold {} tokens", b.place, b.max_tokens), to_value(b)))
                .or_else(unbounded);
            (r.safe, w)
        }
        Property::LocallySafe => (
            r.locally_safe,
            d.local_safety_witness.as_ref().map(|l| {
                Witness::say(
                    format!("P-component {} holds {} tokens in {}", l.component, l.tokens, l.marking),
                    to_value(l),
                )
            }),
        ),
        Property::Perpetual => {
            let mut lines = Vec::new();
            if r.live == Some(false) {
                lines.push("not live".to_string());
            }
            if r.bounded == Some(false) {
                lines.push("not bounded".to_string());
            }
            if r.home_cluster_present == Some(false) {
                lines.push("no home cluster".to_string());
            }
            let json = json!({ "live": r.live, "bounded": r.bounded, "home_cluster_present": r.home_cluster_present });
            (r.perpetual, Some(Witness { lines, json }))
        }
        Property::Lucent => (
            r.lucent,
            d.lucency_witness
                .as_ref()
                .map(|l| Witness::say(format!("{} and {} both enable {}", l.first, l.second, l.enabled), to_value(l))),
        ),
        Property::PCover | Property::TCover => {
            let (holds, comps) = if prop == Property::PCover {
                (r.has_p_cover, p_components(net))
            } else {
                (r.has_t_cover, t_components(net))
            };
            let w = comps.ok().map(|cs| {
                let covered: Vec<Node> = cs.iter().flat_map(|c| c.nodes()).collect();
                let missing: Vec<Node> = net.nodes().filter(|n| !covered.contains(n)).collect();
                let shown = net.show_nodes(&missing);
                Witness::say(format!("not covered: {shown}"), json!({ "uncovered": shown }))
            });
            (holds, w)
        }
        _ => unreachable!("structural properties are decided before the report"),
    };
    let w = if holds == Some(false) { w.unwrap_or_default() } else { Witness::default() };
    (holds, w)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "Yes",
        Some(false) => "No",
        None => "?",
    }
}

fn count(n: Option<usize>) -> String {
    n.map_or_else(|| "?".to_string(), |n| n.to_string())
}

fn human_report(r: &AnalysisReport) -> String {
    let mut s = format!("net {}\n", r.name);
    let rows: [(&str, String); 17] = [
        ("places", r.place_count.to_string()),
        ("transitions", r.transition_count.to_string()),
        ("reachable markings", count(r.reachable_marking_count)),
        ("free-choice", yes_no(Some(r.free_choice)).into()),
        ("live", yes_no(r.live).into()),
        ("bounded", yes_no(r.bounded).into()),
        ("safe", yes_no(r.safe).into()),
        ("locally safe", yes_no(r.locally_safe).into()),
        ("P-components", count(r.p_component_count)),
        ("T-components", count(r.t_component_count)),
        ("P-cover", yes_no(r.has_p_cover).into()),
        ("T-cover", yes_no(r.has_t_cover).into()),
        ("home cluster", yes_no(r.home_cluster_present).into()),
        ("perpetual", yes_no(r.perpetual).into()),
        ("unique blocking markings", yes_no(r.unique_blocking_markings).into()),
        ("lucent", yes_no(r.lucent).into()),
        ("bound", r.details.bound.map_or_else(|| "?".into(), |k| k.to_string())),
    ];
    for (k, v) in rows {
        s += &format!("  {k:<25}{v}\n");
    }
    let d = &r.details;
    let list = |title: &str, xs: &[String]| {
        if xs.is_empty() {
            String::new()
        } else {
            format!("{title}:\n{}", xs.iter().map(|x| format!("  {x}\n")).collect::<String>())
        }
    };
    s += &list("clusters", &d.clusters);
    s += &list("P-components", &d.p_components);
    s += &list("T-components", &d.t_components);
    s += &list("home markings", &d.home_markings);
    s += &list("home clusters", &d.home_clusters);
    let blocking: Vec<String> = d
        .blocking
        .iter()
        .filter(|b| !b.markings.is_empty())
        .map(|b| format!("{} -> {}", b.cluster, b.markings.join(" ")))
        .collect();
    s += &list("blocking markings", &blocking);
    if let Some(l) = &d.liveness_witness {
        s += &format!("not live: {} can never fire again after {}\n", l.transition, l.marking);
    }
    if let Some(l) = &d.local_safety_witness {
        s += &format!("not locally safe: {} holds {} tokens in {}\n", l.component, l.tokens, l.marking);
    }
    if let Some(l) = &d.lucency_witness {
        s += &format!("not lucent: {} and {} both enable {}\n", l.first, l.second, l.enabled);
    }
    if let Some(p) = &d.unbounded_witness {
        s += &format!("unbounded: {} reaches {}, then {} reaches {}\n", p.prefix, p.from, p.pump, p.to);
    }
    for w in &r.warnings {
        s += &format!("warning: {w}\n");
    }
    s
}

const TABLE_HEADER: [&str; 14] =
    ["Net", "Pls", "Trs", "RM", "FreC", "Live", "Boun", "Safe", "LocS", "PC", "HClu", "Perp", "UnBM", "Lucent"];

fn table_row(r: &AnalysisReport) -> [String; 14] {
    [
        r.name.clone(),
        r.place_count.to_string(),
        r.transition_count.to_string(),
        count(r.reachable_marking_count),
        yes_no(Some(r.free_choice)).into(),
        yes_no(r.live).into(),
        yes_no(r.bounded).into(),
        yes_no(r.safe).into(),
        yes_no(r.locally_safe).into(),
        count(r.p_component_count),
        yes_no(r.home_cluster_present).into(),
        yes_no(r.perpetual).into(),
        yes_no(r.unique_blocking_markings).into(),
        yes_no(r.lucent).into(),
    ]
}

/// Net files directly inside `dir`, sorted by path.
pub fn net_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str());
        if path.is_file() && matches!(ext, Some("lpn") | Some("pnml")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn table(dir: &Path, limits: Limits, as_json: bool) -> Result<(i32, String), CliError> {
    let files = net_files(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    let nets = files.iter().map(|f| read_net(f)).collect::<Result<Vec<_>, _>>()?;
    let reports = par::map(&nets, |(net, m0)| analyze(net, m0, limits));
    let code = if reports.iter().any(|r| r.bounded.is_none()) { EXIT_LIMIT } else { EXIT_OK };
    if as_json {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
        return Ok((code, text));
    }
    let rows: Vec<[String; 14]> = reports.iter().map(table_row).collect();
    let header = TABLE_HEADER.map(String::from);
    let widths: Vec<usize> =
        (0..14).map(|c| rows.iter().chain(std::iter::once(&header)).map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(x, &w)| format!("{x:<w$}")).collect();
        out += cells.join("  ").trim_end();
        out.push('\n');
    }
    Ok((code, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus_file(name: &str) -> String {
        format!("{}/corpus/{name}.lpn", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn lucency_alias_and_witness() {
        let out = run(["pnstruct", "check", "lucency", &corpus_file("fig2")]);
        assert_eq!(out.code, EXIT_FAILS);
        assert!(out.stdout.contains("[p2,p5] and [p2,p6] both enable {t3}"), "{}", out.stdout);
        assert_eq!(run(["pnstruct", "check", "lucent", &corpus_file("fig1")]).code, EXIT_OK);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["pnstruct", "check", "nonsense", &corpus_file("fig1")]).code, EXIT_USAGE);
        assert_eq!(run(["pnstruct", "analyze", "/nonexistent.lpn"]).code, EXIT_USAGE);
        assert_eq!(run(["pnstruct", "--max-states", "0", "analyze", &corpus_file("fig1")]).code, EXIT_USAGE);
        assert_eq!(run(["pnstruct", "blocking", &corpus_file("fig1"), "--cluster", "zz"]).code, EXIT_USAGE);
    }

    #[test]
    fn limit_exits_three() {
        let out = run(["pnstruct", "--max-states", "2", "check", "live", &corpus_file("fig3")]);
        assert_eq!(out.code, EXIT_LIMIT, "{out:?}");
        assert_eq!(run(["pnstruct", "--max-states", "2", "check", "cyclic", &corpus_file("fig3")]).code, EXIT_LIMIT);
    }

    #[test]
    fn every_property_runs_on_fig1() {
        for p in Property::value_variants() {
            let name = p.to_possible_value().unwrap().get_name().to_string();
            let out = run(["pnstruct", "check", &name, &corpus_file("fig1")]);
            assert!(out.code == EXIT_OK || out.code == EXIT_FAILS, "{name}: {out:?}");
            let json = run(["pnstruct", "--json", "check", &name, &corpus_file("fig1")]);
            let v: Value = serde_json::from_str(&json.stdout).unwrap();
            assert_eq!(v["property"], name);
        }
    }

    #[test]
    fn check_verdicts_on_fig1() {
        let f = corpus_file("fig1");
        let code = |p: &str| run(["pnstruct", "check", p, &f]).code;
        for p in ["free-choice", "strongly-connected", "live", "bounded", "safe", "cyclic", "perpetual", "lucent"] {
            assert_eq!(code(p), EXIT_OK, "{p}");
        }
        for p in ["p-net", "t-net", "workflow", "sound"] {
            assert_eq!(code(p), EXIT_FAILS, "{p}");
        }
    }

    #[test]
    fn blocking_lists_fig6_pair() {
        let out = run(["pnstruct", "blocking", &corpus_file("fig6"), "--cluster", "t1"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.starts_with("cluster {p1,t1}: 2 blocking marking(s)"), "{}", out.stdout);
    }

    #[test]
    fn gen_prints_lpn() {
        let out = run(["pnstruct", "gen", "--kind", "wf", "--seed", "1", "--size", "1"]);
        assert_eq!(out.stdout, "net wf_1_1\nplace i 1\nplace o\ntrans t1\narc i t1\narc t1 o\n");
        assert_eq!(run(["pnstruct", "gen", "--kind", "random", "--size", "40"]).code, EXIT_USAGE);
    }

    #[test]
    fn short_circuit_fig4_wf() {
        let f = format!("{}/corpus/workflow/fig4_wf.lpn", env!("CARGO_MANIFEST_DIR"));
        let out = run(["pnstruct", "short-circuit", &f]);
        assert_eq!(out.code, EXIT_OK);
        let (net, m) = crate::io::parse_lpn(&out.stdout).unwrap();
        let (fig4, m4) = crate::corpus::load("fig4");
        assert_eq!((net.to_raw(&m).places, net.to_raw(&m).arcs), (fig4.to_raw(&m4).places, fig4.to_raw(&m4).arcs));
        assert_eq!(run(["pnstruct", "short-circuit", &corpus_file("fig1")]).code, EXIT_USAGE);
    }

    #[test]
    fn project_and_components() {
        let f = corpus_file("fig8");
        let comps = run(["pnstruct", "--json", "components", &f, "--kind", "p"]);
        let v: Value = serde_json::from_str(&comps.stdout).unwrap();
        let n = v.as_array().unwrap().len();
        assert!(n >= 2);
        let out = run(["pnstruct", "project", &f, "--components", "0,1"]);
        assert_eq!(out.code, EXIT_OK, "{out:?}");
        assert!(crate::io::parse_lpn(&out.stdout).is_ok());
        assert_eq!(run(["pnstruct", "project", &f, "--components", &n.to_string()]).code, EXIT_USAGE);
    }
}
