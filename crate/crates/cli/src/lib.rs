//! The `soficov` command line. [`run`] does all the work so tests can drive
//! it without spawning a process.
//!
//! Exit codes: 0 success or true, 1 property false or comparison negative,
//! 2 input or usage error, 3 resource cap exceeded.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use soficov_core::covers::{self, Cover, KriegerRoute};
use soficov_core::gprime::{self, Bounds};
use soficov_core::graph::{self, LabeledGraph};
use soficov_core::invariants;
use soficov_core::{lang, Error, Limits};

pub const OK: i32 = 0;
pub const NEGATIVE: i32 = 1;
pub const USAGE: i32 = 2;
pub const CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "soficov", version, about = "Covers of sofic shifts from labeled graph presentations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Merge,
    RegularPart,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    RightResolving,
    Trim,
    Irreducible,
    FollowerSeparated,
    PredecessorSeparated,
    Regular,
    Contains,
    Synchronizing,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Language,
    Isomorphic,
    PeriodicCounts,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoverArg {
    Krieger,
    Fischer,
    Gprime,
    Underline,
    FollowerSet,
    DoubleSubset,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Edges labeled by n-blocks of labels (`--block`).
    HigherBlock,
    /// Edges labeled by 2-blocks of edges: a conjugate shift.
    TwoBlock,
    /// Alphabet rotated by one place.
    Rotate,
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct BoundArgs {
    #[arg(long, default_value_t = Bounds::default().left)]
    pub left_bound: usize,
    #[arg(long, default_value_t = Bounds::default().mid)]
    pub mid_bound: usize,
    #[arg(long, default_value_t = Bounds::default().right)]
    pub right_bound: usize,
}

impl BoundArgs {
    fn bounds(self) -> Bounds {
        Bounds { left: self.left_bound, mid: self.mid_bound, right: self.right_bound }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and normalize a presentation; warns about duplicate edges.
    Parse { input: String },
    /// The future cover.
    Krieger {
        input: String,
        #[arg(long, value_enum, default_value_t = Route::Merge)]
        route: Route,
    },
    /// The Fischer cover of an irreducible shift.
    Fischer { input: String },
    /// G′, with the component selection report in JSON output.
    Gprime {
        input: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// The follower set graph.
    FollowerGraph { input: String },
    /// The graph of tail sets.
    Underline { input: String },
    /// Decide one property; exit 1 when it fails.
    Check {
        input: String,
        #[arg(long, value_enum)]
        property: Property,
        /// Word for `contains` and `synchronizing`.
        #[arg(long)]
        word: Option<String>,
    },
    /// Periodic counts and component signatures of a cover.
    Invariants {
        input: String,
        #[arg(long, value_enum, default_value_t = CoverArg::Krieger)]
        cover: CoverArg,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Compare two presentations; exit 1 when they differ.
    Compare {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Mode::Language)]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
    },
    /// Rewrite a presentation.
    Recode {
        input: String,
        #[arg(long, value_enum, default_value_t = Scheme::HigherBlock)]
        scheme: Scheme,
        #[arg(long, default_value_t = 2)]
        block: usize,
    },
}

/// A finished command: exit code, output body and stderr notes.
struct Done {
    code: i32,
    body: String,
    notes: Vec<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::DepthExhausted(_) => CAP,
            _ => USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: USAGE, message: message.into() }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let text = e.render().to_string();
            let _ = if code == OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut stdin_used = false;
    let mut read = |path: &str| -> Result<String, Failure> {
        if path == "-" {
            if stdin_used {
                return Err(usage("stdin can be read only once"));
            }
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
            stdin_used = true;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
        }
    };
    let limits = Limits::from_env();
    match execute(&cli, &mut read, &limits) {
        Ok(done) => {
            for n in &done.notes {
                let _ = writeln!(stderr, "note: {n}");
            }
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &done.body) {
                    let _ = writeln!(stderr, "error: {}: {e}", path.display());
                    return USAGE;
                }
            } else {
                let _ = stdout.write_all(done.body.as_bytes());
            }
            done.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

type Reader<'a> = dyn FnMut(&str) -> Result<String, Failure> + 'a;

fn load(read: &mut Reader, path: &str) -> Result<(LabeledGraph, Vec<String>), Failure> {
    let text = read(path)?;
    // cover vertices are named like `{a,b}`, so try .lg before JSON
    let parsed = match graph::parse_lg_with_warnings(&text) {
        Err(e) if text.trim_start().starts_with('{') => from_json(&text).map(|g| (g, Vec::new())).ok_or(e),
        r => r,
    };
    let (g, warnings) = parsed.map_err(|e| usage(format!("{path}: {e}")))?;
    Ok((g, warnings.into_iter().map(|w| format!("{path}: {w}")).collect()))
}

/// A graph in JSON, bare or as the `graph` field of a cover report.
fn from_json(text: &str) -> Option<LabeledGraph> {
    let v: Value = serde_json::from_str(text).ok()?;
    let g = v.get("graph").unwrap_or(&v);
    graph::from_json(&g.to_string()).ok()
}

/// Loads a presentation and trims it, noting when that changed anything.
fn load_trim(read: &mut Reader, path: &str) -> Result<(LabeledGraph, Vec<String>), Failure> {
    let (g, mut notes) = load(read, path)?;
    if g.is_trim() {
        return Ok((g, notes));
    }
    let t = graph::trim(&g);
    if t.is_empty() {
        return Err(usage(format!("{path}: graph is empty after trimming")));
    }
    notes.push(format!(
        "{path}: not trim, using the trimmed graph ({} of {} vertices)",
        t.vertex_count(),
        g.vertex_count()
    ));
    Ok((t, notes))
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn render_graph(g: &LabeledGraph, format: Format) -> String {
    match format {
        Format::Text => graph::to_lg(g),
        Format::Json => graph::to_json(g),
        Format::Dot => graph::to_dot(g),
    }
}

fn cover_json(c: &Cover) -> Value {
    let sets: Vec<Vec<String>> =
        c.provenance.iter().map(|ss| ss.iter().map(|s| c.source.format_set(s)).collect()).collect();
    json!({
        "cover": c.kind.name(),
        "graph": graph::to_json_value(&c.graph),
        "sets": sets,
    })
}

fn render_cover(c: &Cover, format: Format, extra: Option<(&str, Value)>) -> String {
    match format {
        Format::Json => {
            let mut v = cover_json(c);
            if let Some((k, x)) = extra {
                v[k] = x;
            }
            json_text(&v)
        }
        f => render_graph(&c.graph, f),
    }
}

fn no_dot(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(usage(format!("--format dot is not available for {what}")));
    }
    Ok(())
}

fn build_cover(g: &LabeledGraph, which: CoverArg, bounds: Bounds, limits: &Limits) -> Result<Cover, Failure> {
    Ok(match which {
        CoverArg::Krieger => covers::krieger_cover(g, KriegerRoute::Merge, limits)?,
        CoverArg::Fischer => covers::fischer_cover(g, limits)?,
        CoverArg::Gprime => gprime::gprime_with_report(g, bounds, limits)?.0,
        CoverArg::Underline => covers::underline_graph(g, limits)?,
        CoverArg::FollowerSet => covers::follower_set_graph(g, limits)?,
        CoverArg::DoubleSubset => gprime::double_subset_graph(g, limits)?,
    })
}

fn execute(cli: &Cli, read: &mut Reader, limits: &Limits) -> Result<Done, Failure> {
    let f = cli.format;
    let ok = |body: String, notes: Vec<String>| Ok(Done { code: OK, body, notes });
    match &cli.command {
        Command::Parse { input } => {
            let (g, notes) = load(read, input)?;
            ok(render_graph(&g, f), notes)
        }
        Command::Krieger { input, route } => {
            let (g, notes) = load_trim(read, input)?;
            let r = match route {
                Route::Merge => KriegerRoute::Merge,
                Route::RegularPart => KriegerRoute::RegularPart,
            };
            ok(render_cover(&covers::krieger_cover(&g, r, limits)?, f, None), notes)
        }
        Command::Fischer { input } => {
            let (g, notes) = load_trim(read, input)?;
            ok(render_cover(&covers::fischer_cover(&g, limits)?, f, None), notes)
        }
        Command::Gprime { input, bounds } => {
            let (g, notes) = load_trim(read, input)?;
            let (c, report) = gprime::gprime_with_report(&g, bounds.bounds(), limits)?;
            let rep = serde_json::to_value(&report).expect("report json");
            ok(render_cover(&c, f, Some(("selection", rep))), notes)
        }
        Command::FollowerGraph { input } => {
            let (g, notes) = load_trim(read, input)?;
            ok(render_cover(&covers::follower_set_graph(&g, limits)?, f, None), notes)
        }
        Command::Underline { input } => {
            let (g, notes) = load_trim(read, input)?;
            ok(render_cover(&covers::underline_graph(&g, limits)?, f, None), notes)
        }
        Command::Check { input, property, word } => {
            no_dot(f, "check")?;
            let (g, notes) = load(read, input)?;
            let (holds, lines) = check(&g, *property, word.as_deref(), limits)?;
            let body = match f {
                Format::Json => json_text(&json!({
                    "property": property.to_possible_value().expect("named").get_name(),
                    "holds": holds,
                    "details": lines,
                })),
                _ => lines.iter().map(|l| format!("{l}\n")).collect(),
            };
            Ok(Done { code: if holds { OK } else { NEGATIVE }, body, notes })
        }
        Command::Invariants { input, cover, max_period, bounds } => {
            no_dot(f, "invariants")?;
            let (g, notes) = load_trim(read, input)?;
            let c = build_cover(&g, *cover, bounds.bounds(), limits)?;
            let rep = invariants::invariant_report(&c, *max_period)?;
            let body = match f {
                Format::Json => {
                    let mut v = serde_json::to_value(&rep).expect("report json");
                    v["max_period"] = json!(max_period);
                    if *cover == CoverArg::Gprime {
                        v["bounds"] = serde_json::to_value(bounds.bounds()).expect("bounds json");
                    }
                    json_text(&v)
                }
                _ => invariants_text(&rep, *max_period),
            };
            ok(body, notes)
        }
        Command::Compare { left, right, mode, max_period } => {
            no_dot(f, "compare")?;
            let (g, mut notes) = load(read, left)?;
            let (h, more) = load(read, right)?;
            notes.extend(more);
            let (same, mut v) = compare(&g, &h, *mode, *max_period, limits)?;
            let body = match f {
                Format::Json => {
                    v["equal"] = json!(same);
                    v.as_object_mut().expect("object").remove("text");
                    json_text(&v)
                }
                _ => v["text"].as_str().expect("text verdict").to_string(),
            };
            Ok(Done { code: if same { OK } else { NEGATIVE }, body, notes })
        }
        Command::Recode { input, scheme, block } => {
            let (g, notes) = load(read, input)?;
            let h = match scheme {
                Scheme::HigherBlock => graph::higher_block(&g, *block)?,
                Scheme::TwoBlock => graph::two_block_recode(&g)?,
                Scheme::Rotate => graph::relabel(&g, &invariants::rotation_map(&g))?,
            };
            ok(render_graph(&h, f), notes)
        }
    }
}

fn invariants_text(rep: &invariants::InvariantReport, k: usize) -> String {
    let periodic: Vec<String> = rep.periodic.iter().map(u128::to_string).collect();
    let mut out = format!(
        "cover {}\nvertices {}\nedges {}\nperiodic 1..{k} {}\n",
        rep.cover,
        rep.vertices,
        rep.edges,
        periodic.join(" ")
    );
    for c in &rep.components {
        let mult = c.multiplicity.map_or("-".to_string(), |m| m.to_string());
        out.push_str(&format!(
            "component size {} edges {} multiplicity {mult}{}{}\n",
            c.size,
            c.edges,
            if c.terminal { " terminal" } else { "" },
            if c.source { " source" } else { "" },
        ));
    }
    out.push_str(&format!("dag {}\n", rep.dag.trim_end()));
    out
}

fn word_arg(g: &LabeledGraph, word: Option<&str>, property: &str) -> Result<Vec<soficov_core::Letter>, Failure> {
    let w = word.ok_or_else(|| usage(format!("--property {property} needs --word")))?;
    g.parse_word(w).map_err(|e| usage(format!("--word: {e}")))
}

fn check(g: &LabeledGraph, p: Property, word: Option<&str>, limits: &Limits) -> Result<(bool, Vec<String>), Failure> {
    if word.is_some() && !matches!(p, Property::Contains | Property::Synchronizing) {
        return Err(usage("--word only applies to contains and synchronizing"));
    }
    let verdict = |holds: bool, yes: &str, no: &str| (holds, vec![if holds { yes } else { no }.to_string()]);
    Ok(match p {
        Property::RightResolving => match g.require_right_resolving() {
            Ok(()) => verdict(true, "right-resolving", ""),
            Err(e) => (false, vec![e.to_string()]),
        },
        Property::Trim => match g.require_trim() {
            Ok(()) => verdict(true, "trim", ""),
            Err(e) => (false, vec![e.to_string()]),
        },
        Property::Irreducible => {
            verdict(covers::is_irreducible(g, limits)?, "irreducible", "not irreducible")
        }
        Property::FollowerSeparated => {
            let part = lang::follower_partition(g)?;
            let merged: Vec<String> = part
                .classes
                .iter()
                .filter(|c| c.len() > 1)
                .map(|c| format!("vertices {} have equal follower sets", g.format_set(c)))
                .collect();
            if merged.is_empty() {
                verdict(true, "follower-separated", "")
            } else {
                (false, merged)
            }
        }
        Property::PredecessorSeparated => verdict(
            covers::is_predecessor_separated(g, limits)?,
            "predecessor-separated",
            "not predecessor-separated",
        ),
        Property::Regular => {
            g.require_trim()?;
            let reg = covers::regular_vertices(g, limits)?;
            let bad: Vec<String> = (0..g.vertex_count())
                .filter(|&v| !reg.contains(v))
                .map(|v| format!("vertex {} not regular", g.vertex_name(v)))
                .collect();
            if bad.is_empty() {
                verdict(true, "all vertices regular", "")
            } else {
                (false, bad)
            }
        }
        Property::Contains => {
            let w = word_arg(g, word, "contains")?;
            let s = g.format_word(&w);
            let holds = lang::contains_word(g, &w)?;
            verdict(holds, &format!("word {s} in the language"), &format!("word {s} not in the language"))
        }
        Property::Synchronizing => {
            let w = word_arg(g, word, "synchronizing")?;
            let s = g.format_word(&w);
            if !lang::contains_word(g, &w)? {
                return Ok((false, vec![format!("word {s} not in the language")]));
            }
            let holds = covers::is_synchronizing_word(g, &w, limits)?;
            verdict(holds, &format!("word {s} is synchronizing"), &format!("word {s} is not synchronizing"))
        }
    })
}

/// Verdict plus a JSON object whose `text` field holds the text rendering.
fn compare(g: &LabeledGraph, h: &LabeledGraph, mode: Mode, k: usize, limits: &Limits) -> Result<(bool, Value), Failure> {
    Ok(match mode {
        Mode::Language => match lang::distinguishing_word(g, h, limits)? {
            None => (true, json!({"mode": "language", "text": "equal\n"})),
            Some(w) => {
                let sep = if w.iter().all(|a| a.chars().count() == 1) { "" } else { " " };
                let word = w.join(sep);
                let ids: Option<Vec<_>> = w.iter().map(|a| g.letter_id(a).ok()).collect();
                let in_first = match ids {
                    Some(ids) => lang::contains_word(g, &ids)?,
                    None => false,
                };
                let side = if in_first { "first" } else { "second" };
                let text = format!("not equal: word {word:?} is only in the {side} language\n");
                (false, json!({"mode": "language", "witness": word, "only_in": side, "text": text}))
            }
        },
        Mode::Isomorphic => {
            let sizes = |x: &LabeledGraph| (x.vertex_count(), x.edge_count());
            let ((gv, ge), (hv, he)) = (sizes(g), sizes(h));
            let reason = if gv != hv {
                Some(format!("{gv} vs {hv} vertices"))
            } else if ge != he {
                Some(format!("{ge} vs {he} edges"))
            } else {
                None
            };
            let found = match reason {
                Some(_) => None,
                None => invariants::graphs_isomorphic(g, h)?,
            };
            match found {
                Some(m) => {
                    let map: Vec<(String, String)> = m
                        .vertices
                        .iter()
                        .enumerate()
                        .map(|(v, &w)| (g.vertex_name(v).to_string(), h.vertex_name(w).to_string()))
                        .collect();
                    let mut text = String::from("isomorphic\n");
                    for (a, b) in &map {
                        text.push_str(&format!("{a} -> {b}\n"));
                    }
                    (true, json!({"mode": "isomorphic", "map": map, "text": text}))
                }
                None => {
                    let why = reason.unwrap_or_else(|| "no label-preserving bijection".into());
                    let text = format!("not isomorphic ({why})\n");
                    (false, json!({"mode": "isomorphic", "reason": why, "text": text}))
                }
            }
        }
        Mode::PeriodicCounts => {
            let (a, b) = (invariants::periodic_counts(g, k)?, invariants::periodic_counts(h, k)?);
            match (1..=k).find(|&n| a[n - 1] != b[n - 1]) {
                None => {
                    let text = format!("equal up to period {k}\n");
                    (true, json!({"mode": "periodic-counts", "max_period": k, "left": a, "right": b, "text": text}))
                }
                Some(n) => {
                    let text = format!("differ at period {n}: {} vs {}\n", a[n - 1], b[n - 1]);
                    let v = json!({"mode": "periodic-counts", "max_period": k, "period": n, "left": a, "right": b, "text": text});
                    (false, v)
                }
            }
        }
    })
}
