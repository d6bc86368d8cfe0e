//! Line-oriented machine description format.
//!
//! ```text
//! tapes: 1,inf
//! heads: 2 (0,1)
//! moves: {0}x{-1,0,1}
//! observables: G
//! initial: q0
//! final: qf
//! lambda0: ++
//! output: head 1 width 1
//! q0 _ -> q1 ZZ (0,1)
//! q1 - -> q0 XX (0,-1) aux
//! q1 + -> qf II (0,0)
//! ```
//!
//! A row's outcome column is `_` (any tag), a single sign (tags whose first
//! component has that sign) or a full tag. `#` starts a comment.

use std::fmt::Write as _;

use super::definition::{
    Geometry, MachineBuilder, MachineDefinition, MovementSet, ObservableDecl, Outcome,
    OutcomePattern, RowSpec, TapeSpec, Transition,
};
use crate::error::{Error, Result};
use crate::observables::ModelName;

const HEADER_KEYS: [&str; 11] = [
    "tapes",
    "heads",
    "moves",
    "observables",
    "initial",
    "final",
    "lambda0",
    "input",
    "output",
    "states",
    "stride",
];

struct RawRow {
    line: usize,
    from: String,
    on: String,
    to: String,
    observable: String,
    movement: Vec<i64>,
    aux: bool,
}

pub fn parse_machine(text: &str) -> Result<MachineDefinition> {
    let mut headers: Vec<(usize, String, String)> = Vec::new();
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.contains("->") {
            rows.push(parse_row(line, content)?);
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| Error::parse(line, format!("expected `key: value` or a row, got `{content}`")))?;
        let key = key.trim().to_ascii_lowercase();
        if !HEADER_KEYS.contains(&key.as_str()) {
            return Err(Error::parse(line, format!("unknown header `{key}`")));
        }
        if headers.iter().any(|(_, k, _)| *k == key) {
            return Err(Error::parse(line, format!("duplicate header `{key}`")));
        }
        headers.push((line, key, value.trim().to_string()));
    }
    let get = |key: &str| headers.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()));

    let (tl, tapes_text) = get("tapes").ok_or_else(|| Error::parse(0, "missing `tapes:` header"))?;
    let mut tapes = Vec::new();
    for t in tapes_text.split(',').map(str::trim) {
        tapes.push(match t {
            "inf" | "∞" => TapeSpec::Infinite,
            n => TapeSpec::Finite(
                n.parse()
                    .ok()
                    .filter(|&n: &usize| n > 0)
                    .ok_or_else(|| Error::parse(tl, format!("bad tape length `{n}`")))?,
            ),
        });
    }
    let head_tapes = match get("heads") {
        Some((l, v)) => parse_heads(l, v, tapes.len())?,
        None => vec![0],
    };
    let k = head_tapes.len();
    let geometry = Geometry { tapes, head_tapes };
    let mut b = MachineBuilder::new(geometry);
    if let Some((l, v)) = get("moves") {
        b = b.moves(MovementSet::parse(v).map_err(|e| Error::parse(l, e.to_string()))?);
    }
    let (ol, decl) = get("observables").ok_or_else(|| Error::parse(0, "missing `observables:` header"))?;
    b = b.observables(match decl.parse::<ModelName>() {
        Ok(m) => ObservableDecl::Set(m),
        Err(_) => {
            let list: Vec<String> = decl
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if list.is_empty() {
                return Err(Error::parse(ol, "empty observable list"));
            }
            ObservableDecl::List(list)
        }
    });
    if let Some((_, v)) = get("initial") {
        b = b.initial(v);
    }
    if let Some((_, v)) = get("final") {
        b = b.final_state(v);
    }
    if let Some((l, v)) = get("lambda0") {
        b = b.lambda0(Outcome::parse(v, k).map_err(|e| Error::parse(l, e.to_string()))?);
    }
    if let Some((l, v)) = get("input") {
        let words: Vec<&str> = v.split_whitespace().collect();
        match words.as_slice() {
            ["head", h] => {
                b = b.input_head(h.parse().map_err(|_| Error::parse(l, format!("bad head `{h}`")))?)
            }
            _ => return Err(Error::parse(l, "expected `input: head <i>`")),
        }
    }
    if let Some((l, v)) = get("output") {
        let words: Vec<&str> = v.split_whitespace().collect();
        match words.as_slice() {
            ["head", h, "width", w] => {
                let h = h.parse().map_err(|_| Error::parse(l, format!("bad head `{h}`")))?;
                let w = w.parse().map_err(|_| Error::parse(l, format!("bad width `{w}`")))?;
                b = b.output(h, w);
            }
            ["head", h] => {
                b = b.output(h.parse().map_err(|_| Error::parse(l, format!("bad head `{h}`")))?, 1)
            }
            _ => return Err(Error::parse(l, "expected `output: head <i> width <w>`")),
        }
    }
    if let Some((l, v)) = get("stride") {
        b = b.stride(v.parse().map_err(|_| Error::parse(l, format!("bad stride `{v}`")))?);
    }
    if let Some((_, v)) = get("states") {
        for s in v.split([',', ' ']).map(str::trim).filter(|s| !s.is_empty()) {
            b.declare_state(s);
        }
    }
    for r in rows {
        let on = parse_pattern(&r.on, k).map_err(|e| Error::parse(r.line, e.to_string()))?;
        b.add_at_line(
            r.line,
            RowSpec {
                from: r.from,
                on,
                to: r.to,
                observable: r.observable,
                movement: r.movement,
                aux: r.aux,
            },
        );
    }
    b.build()
}

fn parse_heads(line: usize, text: &str, tape_count: usize) -> Result<Vec<usize>> {
    let (count, rest) = match text.split_once('(') {
        Some((c, r)) => (c.trim(), Some(r)),
        None => (text.trim(), None),
    };
    let k: usize = count
        .parse()
        .map_err(|_| Error::parse(line, format!("bad head count `{count}`")))?;
    let assignment = match rest {
        Some(r) => {
            let inner = r
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(line, "unclosed head assignment"))?;
            inner
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line, format!("bad tape index `{}`", s.trim())))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None if tape_count == 1 => vec![0; k],
        None => (0..k).collect(),
    };
    if assignment.len() != k {
        return Err(Error::parse(line, format!("{k} heads but {} tape assignments", assignment.len())));
    }
    if let Some(&t) = assignment.iter().find(|&&t| t >= tape_count) {
        return Err(Error::parse(line, format!("head assigned to missing tape {t}")));
    }
    Ok(assignment)
}

fn parse_row(line: usize, content: &str) -> Result<RawRow> {
    let (lhs, rhs) = content.split_once("->").expect("caller checked");
    let left: Vec<&str> = lhs.split_whitespace().collect();
    let [from, on] = left.as_slice() else {
        return Err(Error::parse(line, "expected `<state> <outcome> -> ...`"));
    };
    let rhs = rhs.trim();
    let open = rhs
        .find('(')
        .ok_or_else(|| Error::parse(line, "missing movement `(d1,...,dk)`"))?;
    let close = rhs[open..]
        .find(')')
        .map(|c| c + open)
        .ok_or_else(|| Error::parse(line, "unclosed movement"))?;
    let head: Vec<&str> = rhs[..open].split_whitespace().collect();
    let [to, observable] = head.as_slice() else {
        return Err(Error::parse(line, "expected `-> <state> <observable> (moves)`"));
    };
    let movement = rhs[open + 1..close]
        .split(',')
        .map(|d| {
            d.trim()
                .trim_start_matches('+')
                .parse::<i64>()
                .map_err(|_| Error::parse(line, format!("bad movement `{}`", d.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = rhs[close + 1..].trim();
    let aux = match tail {
        "" => false,
        "aux" => true,
        other => return Err(Error::parse(line, format!("unexpected `{other}` after movement"))),
    };
    Ok(RawRow {
        line,
        from: from.to_string(),
        on: on.to_string(),
        to: to.to_string(),
        observable: observable.to_string(),
        movement,
        aux,
    })
}

fn parse_pattern(text: &str, k: usize) -> Result<OutcomePattern> {
    match text {
        "_" => Ok(OutcomePattern::Any),
        _ if text.chars().count() == k => Ok(OutcomePattern::Exact(Outcome::parse(text, k)?)),
        "+" => Ok(OutcomePattern::Sign(1)),
        "-" => Ok(OutcomePattern::Sign(-1)),
        _ => Err(Error::Validation(format!("bad outcome pattern `{text}`"))),
    }
}

/// Text form of a machine; [`parse_machine`] reads it back to an equal
/// definition.
pub fn format_machine(m: &MachineDefinition) -> String {
    let k = m.heads();
    let g = m.geometry();
    let mut s = String::new();
    let tapes: Vec<String> = g.tapes.iter().map(ToString::to_string).collect();
    let assign: Vec<String> = g.head_tapes.iter().map(ToString::to_string).collect();
    let _ = writeln!(s, "tapes: {}", tapes.join(","));
    let _ = writeln!(s, "heads: {k} ({})", assign.join(","));
    let _ = writeln!(s, "moves: {}", m.movement_set());
    let _ = writeln!(s, "observables: {}", m.declared_observables());
    let _ = writeln!(s, "initial: {}", m.state_name(m.initial()));
    let _ = writeln!(s, "final: {}", m.state_name(m.final_state()));
    let _ = writeln!(s, "lambda0: {}", m.lambda0().format(k));
    if m.input_head() != 0 {
        let _ = writeln!(s, "input: head {}", m.input_head());
    }
    let out = m.output();
    let _ = writeln!(s, "output: head {} width {}", out.head, out.width);
    if m.stride() != 1 {
        let _ = writeln!(s, "stride: {}", m.stride());
    }
    let _ = writeln!(s, "states: {}", m.states().join(" "));
    let row = |s: &mut String, q: &str, on: &str, t: &Transition| {
        let mv: Vec<String> = t.movement.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            s,
            "{q} {on} -> {} {} ({}){}",
            m.state_name(t.next),
            m.observable(t).name(),
            mv.join(","),
            if t.aux { " aux" } else { "" }
        );
    };
    for q in 0..m.states().len() {
        if q == m.final_state() {
            continue;
        }
        let name = m.state_name(q);
        for (on, t) in m.grouped_rows(q) {
            let on = match on {
                OutcomePattern::Any => "_".to_string(),
                OutcomePattern::Sign(1) => "+".to_string(),
                OutcomePattern::Sign(_) => "-".to_string(),
                OutcomePattern::Exact(tag) => tag.format(k),
            };
            row(&mut s, name, &on, t);
        }
    }
    s
}
