//! Line-oriented text format and DOT export.
//!
//! ```text
//! arity 2
//! states 3
//! initial 0
//! outputs            (DFAO only, followed by one `state <id> <letter>` per state)
//! accepting 0 2
//! 0 0 0 0            (<src> <d1 .. dk> <dst>, one line per transition)
//! ```

use std::fmt::Write as _;

use super::machines::{Dfa, Dfao, Table};
use super::{digit, symbol_count, Letter, StateId, MAX_ARITY, NONE};
use crate::error::{Error, Result};

/// Either kind of deterministic machine read from text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Dfa(Dfa),
    Dfao(Dfao),
}

impl Automaton {
    pub fn to_text(&self) -> String {
        match self {
            Automaton::Dfa(d) => d.to_text(),
            Automaton::Dfao(d) => d.to_text(),
        }
    }
}

fn write_table(out: &mut String, table: &Table, outputs: Option<&[Letter]>, accepting: &[bool]) {
    let k = table.k();
    let _ = writeln!(out, "arity {}", table.arity);
    let _ = writeln!(out, "states {}", table.len());
    let _ = writeln!(out, "initial {}", table.initial);
    if let Some(outputs) = outputs {
        out.push_str("outputs\n");
        for (q, o) in outputs.iter().enumerate() {
            let _ = writeln!(out, "state {q} {o}");
        }
    }
    out.push_str("accepting");
    for (q, &a) in accepting.iter().enumerate() {
        if a {
            let _ = write!(out, " {q}");
        }
    }
    out.push('\n');
    for q in 0..table.len() {
        for s in 0..k {
            let t = table.delta[q * k + s];
            if t == NONE {
                continue;
            }
            let _ = write!(out, "{q}");
            for track in 0..table.arity {
                let _ = write!(out, " {}", digit(s, track, table.arity));
            }
            let _ = writeln!(out, " {t}");
        }
    }
}

impl Dfa {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_table(&mut out, &self.table, None, &self.accepting);
        out
    }
}

impl Dfao {
    /// The accepting line is written empty: DFAOs do not use it.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_table(
            &mut out,
            &self.table,
            Some(&self.output),
            &vec![false; self.num_states()],
        );
        out
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T> {
    tok.ok_or_else(|| Error::Parse(format!("line {line}: missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad {what}")))
}

/// Parses the text format. The presence of an `outputs` block selects a DFAO.
pub fn from_text(text: &str) -> Result<Automaton> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut it = lines.into_iter().peekable();
    let mut take = |key: &str| -> Result<u64> {
        let (no, line) = it
            .next()
            .ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
        let mut toks = line.split_whitespace();
        if toks.next() != Some(key) {
            return Err(Error::Parse(format!("line {no}: expected `{key}`")));
        }
        let v = parse_num(toks.next(), key, no)?;
        if toks.next().is_some() {
            return Err(Error::Parse(format!("line {no}: trailing tokens")));
        }
        Ok(v)
    };
    let arity = take("arity")? as usize;
    let n = take("states")? as usize;
    let initial = take("initial")? as StateId;
    if !(1..=MAX_ARITY).contains(&arity) {
        return Err(Error::Parse(format!("arity {arity} out of range")));
    }
    if n == 0 {
        return Err(Error::Parse("automaton needs at least one state".into()));
    }

    let mut outputs: Option<Vec<Option<Letter>>> = None;
    if matches!(it.peek(), Some((_, "outputs"))) {
        it.next();
        let mut outs = vec![None; n];
        while let Some(&(no, line)) = it.peek() {
            if !line.starts_with("state") {
                break;
            }
            it.next();
            let mut toks = line.split_whitespace().skip(1);
            let q: usize = parse_num(toks.next(), "state id", no)?;
            let o: Letter = parse_num(toks.next(), "output letter", no)?;
            if q >= n {
                return Err(Error::Parse(format!("line {no}: state {q} out of range")));
            }
            outs[q] = Some(o);
        }
        outputs = Some(outs);
    }

    let (no, line) = it
        .next()
        .ok_or_else(|| Error::Parse("missing `accepting` line".into()))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some("accepting") {
        return Err(Error::Parse(format!("line {no}: expected `accepting`")));
    }
    let mut accepting = vec![false; n];
    for tok in toks {
        let q: usize = parse_num(Some(tok), "accepting state", no)?;
        if q >= n {
            return Err(Error::Parse(format!("line {no}: state {q} out of range")));
        }
        accepting[q] = true;
    }

    let k = symbol_count(arity);
    let mut delta = vec![NONE; n * k];
    for (no, line) in it {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != arity + 2 {
            return Err(Error::Parse(format!(
                "line {no}: expected {} fields",
                arity + 2
            )));
        }
        let src: usize = parse_num(Some(toks[0]), "source", no)?;
        let dst: StateId = parse_num(Some(toks[arity + 1]), "target", no)?;
        let mut sym = 0usize;
        for t in &toks[1..=arity] {
            let d: u8 = parse_num(Some(t), "digit", no)?;
            if d > 1 {
                return Err(Error::Parse(format!("line {no}: digit {d} is not binary")));
            }
            sym = (sym << 1) | d as usize;
        }
        if src >= n || dst as usize >= n {
            return Err(Error::Parse(format!("line {no}: state out of range")));
        }
        let slot = &mut delta[src * k + sym];
        if *slot != NONE && *slot != dst {
            return Err(Error::Parse(format!(
                "line {no}: nondeterministic transition"
            )));
        }
        *slot = dst;
    }

    match outputs {
        Some(outs) => {
            let output = outs
                .into_iter()
                .enumerate()
                .map(|(q, o)| o.ok_or_else(|| Error::Parse(format!("state {q} has no output"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Automaton::Dfao(Dfao::new(arity, initial, delta, output)?))
        }
        None => Ok(Automaton::Dfa(Dfa::new(arity, initial, delta, accepting)?)),
    }
}

fn dot_body(out: &mut String, table: &Table, label: impl Fn(usize) -> (String, bool)) {
    let k = table.k();
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  __start [shape=point];\n");
    let _ = writeln!(out, "  __start -> {};", table.initial);
    for q in 0..table.len() {
        let (text, double) = label(q);
        let shape = if double { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {q} [label=\"{text}\", shape={shape}];");
    }
    for q in 0..table.len() {
        // group symbols sharing a target into one edge
        let mut edges: Vec<(StateId, Vec<String>)> = Vec::new();
        for s in 0..k {
            let t = table.delta[q * k + s];
            if t == NONE {
                continue;
            }
            let sym: String = if table.arity == 1 {
                digit(s, 0, 1).to_string()
            } else {
                let ds: Vec<String> = (0..table.arity)
                    .map(|i| digit(s, i, table.arity).to_string())
                    .collect();
                format!("[{}]", ds.join(","))
            };
            match edges.iter_mut().find(|(tt, _)| *tt == t) {
                Some((_, v)) => v.push(sym),
                None => edges.push((t, vec![sym])),
            }
        }
        for (t, syms) in edges {
            let _ = writeln!(out, "  {q} -> {t} [label=\"{}\"];", syms.join(" "));
        }
    }
}

/// Graphviz rendering; accepting states are double circles.
pub fn to_dot(dfa: &Dfa) -> String {
    let mut out = String::from("digraph dfa {\n");
    dot_body(&mut out, &dfa.table, |q| (q.to_string(), dfa.accepting[q]));
    out.push_str("}\n");
    out
}

/// Graphviz rendering; nodes are labelled `state/output`.
pub fn to_dot_dfao(dfao: &Dfao) -> String {
    let mut out = String::from("digraph dfao {\n");
    dot_body(&mut out, &dfao.table, |q| {
        (format!("{q}/{}", dfao.output[q]), false)
    });
    out.push_str("}\n");
    out
}
