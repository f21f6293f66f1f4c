//! Line-oriented text formats for instances and solve reports.
//!
//! Instance:
//!
//! ```text
//! ect 1 <n> <m>
//! v <cost> [<x> <y>]        one line per node, ids 0..n in order
//! e <u> <v>                 one line per edge, ids 0..m in order
//! rot <v> <edge ids...>     optional, overrides the coordinates
//! ```
//!
//! Costs are `num/den` or `inf`; coordinates are integers or `num/den`.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Zero;

use crate::dual::{Coefficients, Inequality, InequalityKind};
use crate::embed::Point;
use crate::graph::{Graph, NodeId, Parity};
use crate::instance::Instance;
use crate::solver::{Branch, IterationRecord, PieceCheck, SolveReport, TilingStats};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

fn rational(line: usize, s: &str) -> Result<Rational, ParseError> {
    Rational::from_str(s).or_else(|_| err(line, format!("bad rational `{s}`")))
}

fn number<T: FromStr>(line: usize, s: &str) -> Result<T, ParseError> {
    s.parse().or_else(|_| err(line, format!("bad number `{s}`")))
}

fn content(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn ratio_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    writeln!(out, "ect 1 {} {}", g.node_count(), g.edge_count()).unwrap();
    for v in g.nodes() {
        let cost = if inst.infinite.contains(&v) { "inf".to_string() } else { ratio_text(g.cost(v)) };
        match inst.point(v) {
            Some(p) => writeln!(out, "v {cost} {} {}", p.x, p.y).unwrap(),
            None => writeln!(out, "v {cost}").unwrap(),
        }
    }
    for (_, e) in g.edges() {
        writeln!(out, "e {} {}", e.u, e.v).unwrap();
    }
    if let Some(rot) = &inst.rotation {
        for v in g.nodes() {
            let ids: Vec<String> = rot[v].iter().map(ToString::to_string).collect();
            writeln!(out, "rot {v} {}", ids.join(" ")).unwrap();
        }
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content(text);
    let Some((l, head)) = lines.next() else { return err(1, "empty input") };
    if head.len() != 4 || head[0] != "ect" || head[1] != "1" {
        return err(l, "expected header `ect 1 <n> <m>`");
    }
    let n: usize = number(l, head[2])?;
    let m: usize = number(l, head[3])?;
    let mut inst = Instance::new(Graph::new(), Vec::new());
    let mut rotation: Vec<Option<Vec<usize>>> = Vec::new();
    for (l, t) in lines {
        match t[0] {
            "v" => {
                if inst.graph.edge_count() > 0 || rotation.iter().any(Option::is_some) {
                    return err(l, "node lines must come first");
                }
                if t.len() != 2 && t.len() != 4 {
                    return err(l, "expected `v <cost> [<x> <y>]`");
                }
                let v = if t[1] == "inf" {
                    let v = inst.graph.add_node(Rational::zero());
                    inst.infinite.insert(v);
                    v
                } else {
                    let c = rational(l, t[1])?;
                    if c < Rational::zero() {
                        return err(l, "negative cost");
                    }
                    inst.graph.add_node(c)
                };
                let p = if t.len() == 4 { Some(Point::new(rational(l, t[2])?, rational(l, t[3])?)) } else { None };
                inst.coords.push(p);
                rotation.push(None);
                debug_assert_eq!(v + 1, inst.coords.len());
            }
            "e" => {
                if t.len() != 3 {
                    return err(l, "expected `e <u> <v>`");
                }
                let (u, v): (NodeId, NodeId) = (number(l, t[1])?, number(l, t[2])?);
                if u >= inst.graph.node_count() || v >= inst.graph.node_count() {
                    return err(l, "edge endpoint out of range");
                }
                inst.graph.add_edge(u, v, Parity::Odd);
            }
            "rot" => {
                if t.len() < 2 {
                    return err(l, "expected `rot <v> <edge ids...>`");
                }
                let v: NodeId = number(l, t[1])?;
                if v >= rotation.len() || rotation[v].is_some() {
                    return err(l, "rotation node out of range or repeated");
                }
                rotation[v] = Some(t[2..].iter().map(|s| number(l, s)).collect::<Result<_, _>>()?);
            }
            other => return err(l, format!("unknown record `{other}`")),
        }
    }
    if inst.graph.node_count() != n || inst.graph.edge_count() != m {
        return err(1, format!("header announces {n} nodes and {m} edges"));
    }
    if rotation.iter().any(Option::is_some) {
        if rotation.iter().any(Option::is_none) {
            return err(1, "rotation block must list every node");
        }
        inst.rotation = Some(rotation.into_iter().map(Option::unwrap).collect());
    }
    Ok(inst)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn list_or_dash(s: String) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s
    }
}

/// Serializes a report; `verdicts` are appended as `verdict` lines.
pub fn write_report(r: &SolveReport, verdicts: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "ect-report 1").unwrap();
    writeln!(out, "solution {}", list_or_dash(join(&r.solution, " "))).unwrap();
    writeln!(out, "cost {}", r.cost).unwrap();
    writeln!(out, "dual {}", r.dual_objective).unwrap();
    match r.ratio() {
        Some(x) => writeln!(out, "ratio {x}").unwrap(),
        None => writeln!(out, "ratio none").unwrap(),
    }
    writeln!(out, "infinite-in-solution {}", r.infinite_in_solution).unwrap();
    writeln!(out, "order {}", list_or_dash(join(&r.order, " "))).unwrap();
    for (a, b) in &r.pairs {
        writeln!(out, "pair {a} {b}").unwrap();
    }
    for i in &r.inequalities {
        let kind = match i.kind {
            InequalityKind::Cycle => "cycle",
            InequalityKind::Blended => "blended",
        };
        let coefs = join(i.coefficients.iter().map(|(v, a)| format!("{v}:{a}")), " ");
        writeln!(out, "ineq {kind} {} {} {coefs}", i.iteration, i.y).unwrap();
    }
    for (k, it) in r.iterations.iter().enumerate() {
        let branch = match it.branch {
            Branch::CheapCycle => "cheap",
            Branch::Tiling => "tiling",
        };
        write!(out, "iter {k} branch={branch} residual={} pocket={}", it.residual_nodes, it.pocket_nodes).unwrap();
        if let Some(t) = &it.tiling {
            write!(
                out,
                " tiles={} faces={} even={} odd={} covered={} beta={} psi={}",
                t.tiles, t.finite_faces, t.even_faces, t.odd_faces, t.covered_odd, t.beta, t.psi
            )
            .unwrap();
        }
        let pairs = join(it.pairs.iter().map(|(a, b)| format!("{a}-{b}")), ",");
        writeln!(
            out,
            " eps={} events={} added={} pairs={}",
            list_or_dash(join(&it.epsilons, ",")),
            it.handle_events,
            list_or_dash(join(&it.added, ",")),
            list_or_dash(pairs)
        )
        .unwrap();
    }
    writeln!(out, "pieces {} violations {}", r.piece_check.pieces, r.piece_check.violations.len()).unwrap();
    for v in &r.piece_check.violations {
        writeln!(out, "piece-violation {v}").unwrap();
    }
    for v in verdicts {
        writeln!(out, "verdict {v}").unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

fn ids(l: usize, items: &[&str]) -> Result<Vec<NodeId>, ParseError> {
    if items == ["-"] {
        return Ok(Vec::new());
    }
    items.iter().map(|s| number(l, s)).collect()
}

fn csv<T>(l: usize, s: &str, f: impl Fn(usize, &str) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| f(l, x)).collect()
}

fn parse_iteration(l: usize, t: &[&str]) -> Result<IterationRecord, ParseError> {
    let mut kv = std::collections::BTreeMap::new();
    for tok in &t[2..] {
        let Some((k, v)) = tok.split_once('=') else { return err(l, format!("bad field `{tok}`")) };
        kv.insert(k, v);
    }
    let get = |k: &str| kv.get(k).copied().ok_or(ParseError { line: l, message: format!("missing `{k}`") });
    let branch = match get("branch")? {
        "cheap" => Branch::CheapCycle,
        "tiling" => Branch::Tiling,
        other => return err(l, format!("unknown branch `{other}`")),
    };
    let tiling = if kv.contains_key("tiles") {
        Some(TilingStats {
            tiles: number(l, get("tiles")?)?,
            finite_faces: number(l, get("faces")?)?,
            even_faces: number(l, get("even")?)?,
            odd_faces: number(l, get("odd")?)?,
            covered_odd: number(l, get("covered")?)?,
            beta: rational(l, get("beta")?)?,
            psi: rational(l, get("psi")?)?,
        })
    } else {
        None
    };
    let pairs = csv(l, get("pairs")?, |l, s| {
        let Some((a, b)) = s.split_once('-') else { return err(l, format!("bad pair `{s}`")) };
        Ok((number(l, a)?, number(l, b)?))
    })?;
    Ok(IterationRecord {
        branch,
        residual_nodes: number(l, get("residual")?)?,
        pocket_nodes: number(l, get("pocket")?)?,
        tiling,
        epsilons: csv(l, get("eps")?, rational)?,
        handle_events: number(l, get("events")?)?,
        added: csv(l, get("added")?, number)?,
        pairs,
    })
}

/// Parses a report written by [`write_report`]; verdict lines are returned
/// separately.
pub fn parse_report(text: &str) -> Result<(SolveReport, Vec<String>), ParseError> {
    let mut lines = content(text);
    match lines.next() {
        Some((_, t)) if t == ["ect-report", "1"] => {}
        Some((l, _)) => return err(l, "expected header `ect-report 1`"),
        None => return err(1, "empty input"),
    }
    let mut r = SolveReport {
        solution: Vec::new(),
        cost: Rational::zero(),
        dual_objective: Rational::zero(),
        order: Vec::new(),
        pairs: Vec::new(),
        inequalities: Vec::new(),
        iterations: Vec::new(),
        infinite_in_solution: false,
        piece_check: PieceCheck::default(),
    };
    let mut verdicts = Vec::new();
    let mut ended = false;
    for (l, t) in lines {
        if ended {
            return err(l, "content after `end`");
        }
        let arg = |i: usize| t.get(i).copied().ok_or(ParseError { line: l, message: "missing field".into() });
        match t[0] {
            "solution" => r.solution = ids(l, &t[1..])?,
            "cost" => r.cost = rational(l, arg(1)?)?,
            "dual" => r.dual_objective = rational(l, arg(1)?)?,
            "ratio" => {}
            "infinite-in-solution" => r.infinite_in_solution = arg(1)? == "true",
            "order" => r.order = ids(l, &t[1..])?,
            "pair" => r.pairs.push((number(l, arg(1)?)?, number(l, arg(2)?)?)),
            "ineq" => {
                let kind = match arg(1)? {
                    "cycle" => InequalityKind::Cycle,
                    "blended" => InequalityKind::Blended,
                    other => return err(l, format!("unknown inequality kind `{other}`")),
                };
                let mut coefficients = Coefficients::new();
                for tok in &t[4..] {
                    let Some((v, a)) = tok.split_once(':') else { return err(l, format!("bad coefficient `{tok}`")) };
                    coefficients.insert(number(l, v)?, rational(l, a)?);
                }
                r.inequalities.push(Inequality {
                    kind,
                    iteration: number(l, arg(2)?)?,
                    y: rational(l, arg(3)?)?,
                    coefficients,
                });
            }
            "iter" => r.iterations.push(parse_iteration(l, &t)?),
            "pieces" => {
                r.piece_check.pieces = number(l, arg(1)?)?;
            }
            "piece-violation" => r.piece_check.violations.push(t[1..].join(" ")),
            "verdict" => verdicts.push(t[1..].join(" ")),
            "end" => ended = true,
            other => return err(l, format!("unknown record `{other}`")),
        }
    }
    if !ended {
        return err(text.lines().count(), "missing `end`");
    }
    Ok((r, verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{handle_chain, CostProfile, InstanceSpec};
    use crate::solver::run_primal_dual;

    #[test]
    fn instance_round_trip() {
        let inst = InstanceSpec::Grid { width: 3, height: 2, costs: CostProfile::Uniform(1, 9), seed: 1 }.build().unwrap();
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        let chain = handle_chain(1).unwrap().instance;
        let text = write_instance(&chain);
        assert!(text.contains("v inf"));
        assert_eq!(parse_instance(&text).unwrap(), chain);
    }

    #[test]
    fn rotation_only_instance() {
        let text = "ect 1 4 4\nv 1/1\nv 1/1\nv 1/1\nv 1/1\ne 0 1\ne 1 2\ne 2 3\ne 3 0\nrot 0 0 3\nrot 1 1 0\nrot 2 2 1\nrot 3 3 2\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.rotation.is_some());
        assert!(inst.validate().is_ok());
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn malformed_instances() {
        assert!(parse_instance("ect 2 0 0\n").is_err());
        assert!(parse_instance("ect 1 1 0\nv -1/1 0 0\n").is_err());
        assert!(parse_instance("ect 1 2 1\nv 1/1 0 0\nv 1/1 1 0\ne 0 5\n").is_err());
        assert!(parse_instance("ect 1 2 0\nv 1/1 0 0\n").is_err());
        assert!(parse_instance("").is_err());
    }

    #[test]
    fn report_round_trip() {
        let inst = InstanceSpec::Grid { width: 4, height: 4, costs: CostProfile::Uniform(1, 9), seed: 2 }.build().unwrap();
        let rep = run_primal_dual(&inst).unwrap();
        let text = write_report(&rep, &["certificate ok".into()]);
        let (back, verdicts) = parse_report(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(verdicts, vec!["certificate ok".to_string()]);
        assert_eq!(write_report(&back, &verdicts), text);
    }
}
