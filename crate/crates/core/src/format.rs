//! Line-based text formats. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! nfa <num_states> <alphabet_size>
//! initial <id>...
//! final <id>...
//! trans <p> <a> <q> [<weight>]
//! ```
//!
//! An automaton is weighted iff every `trans` line has a weight. A file may hold several
//! automata, each starting with its own `nfa` line. The other formats are
//! `prog <b> <a>...` for progressions, `ov <k> <n> <d>` followed by `k*n` bit strings,
//! and `layers <k> <n>` followed by `edge <layer> <i> <j>` lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::nfa::{Nfa, WeightedAutomaton};
use crate::progressions::ProgressionsInstance;
use crate::reductions::{LayeredGraph, OvInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Plain(Nfa),
    Weighted(WeightedAutomaton),
}

impl Automaton {
    pub fn nfa(&self) -> &Nfa {
        match self {
            Automaton::Plain(a) => a,
            Automaton::Weighted(w) => w.nfa(),
        }
    }
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Non-empty lines with comments stripped, as (1-based line number, tokens).
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().or_else(|_| err(line, format!("expected a number, found `{tok}`")))
}

fn nums<T: std::str::FromStr>(line: usize, toks: &[&str]) -> Result<Vec<T>> {
    toks.iter().map(|t| num(line, t)).collect()
}

fn expect_args(line: usize, toks: &[&str], count: usize) -> Result<()> {
    if toks.len() != count + 1 {
        return err(line, format!("`{}` takes {count} arguments", toks[0]));
    }
    Ok(())
}

struct Draft {
    line: usize,
    n: usize,
    sigma: usize,
    initial: Vec<usize>,
    finals: Vec<usize>,
    trans: Vec<(usize, usize, usize, Option<i64>)>,
    trans_lines: Vec<usize>,
}

impl Draft {
    fn finish(self) -> Result<Automaton> {
        let weighted = self.trans.iter().filter(|t| t.3.is_some()).count();
        let at = |r: Result<Automaton>| r.or_else(|e| err(self.line, e.to_string()));
        if weighted > 0 && weighted < self.trans.len() {
            let i = self.trans.iter().position(|t| t.3.is_none()).unwrap();
            return err(self.trans_lines[i], "missing weight (other transitions are weighted)");
        }
        if weighted > 0 {
            at(WeightedAutomaton::new(
                self.n,
                self.sigma,
                self.trans.iter().map(|&(p, a, q, w)| (p, a, q, w.unwrap())),
                self.initial,
                self.finals,
            )
            .map(Automaton::Weighted))
        } else {
            at(Nfa::new(
                self.n,
                self.sigma,
                self.trans.iter().map(|&(p, a, q, _)| (p, a, q)),
                self.initial,
                self.finals,
            )
            .map(Automaton::Plain))
        }
    }
}

/// Parses every automaton in `text`.
pub fn parse_automata(text: &str) -> Result<Vec<Automaton>> {
    let mut out = Vec::new();
    let mut draft: Option<Draft> = None;
    for (line, toks) in records(text) {
        if toks[0] == "nfa" {
            expect_args(line, &toks, 2)?;
            if let Some(d) = draft.take() {
                out.push(d.finish()?);
            }
            draft = Some(Draft {
                line,
                n: num(line, toks[1])?,
                sigma: num(line, toks[2])?,
                initial: Vec::new(),
                finals: Vec::new(),
                trans: Vec::new(),
                trans_lines: Vec::new(),
            });
            continue;
        }
        let Some(d) = draft.as_mut() else {
            return err(line, "expected `nfa <states> <alphabet>` first");
        };
        let check = |line, ids: &[usize], bound: usize, what: &str| -> Result<()> {
            match ids.iter().find(|&&x| x >= bound) {
                Some(x) => err(line, format!("{what} {x} out of range (< {bound})")),
                None => Ok(()),
            }
        };
        match toks[0] {
            "initial" | "final" => {
                let ids: Vec<usize> = nums(line, &toks[1..])?;
                check(line, &ids, d.n, "state")?;
                if toks[0] == "initial" { &mut d.initial } else { &mut d.finals }.extend(ids);
            }
            "trans" => {
                if toks.len() != 4 && toks.len() != 5 {
                    return err(line, "`trans` takes 3 or 4 arguments");
                }
                let (p, a, q) = (num(line, toks[1])?, num(line, toks[2])?, num(line, toks[3])?);
                check(line, &[p, q], d.n, "state")?;
                check(line, &[a], d.sigma, "symbol")?;
                let w = if toks.len() == 5 { Some(num(line, toks[4])?) } else { None };
                d.trans.push((p, a, q, w));
                d.trans_lines.push(line);
            }
            other => return err(line, format!("unknown record `{other}`")),
        }
    }
    match draft {
        Some(d) => out.push(d.finish()?),
        None if out.is_empty() => return err(1, "no automaton found"),
        None => {}
    }
    Ok(out)
}

/// Parses a file holding exactly one automaton.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut all = parse_automata(text)?;
    if all.len() != 1 {
        return err(1, format!("expected one automaton, found {}", all.len()));
    }
    Ok(all.pop().unwrap())
}

fn write_header(out: &mut String, a: &Nfa) {
    let ids = |v: &[usize]| v.iter().map(|q| format!(" {q}")).collect::<String>();
    writeln!(out, "nfa {} {}", a.num_states(), a.alphabet_size()).unwrap();
    if !a.initial().is_empty() {
        writeln!(out, "initial{}", ids(a.initial())).unwrap();
    }
    if !a.finals().is_empty() {
        writeln!(out, "final{}", ids(a.finals())).unwrap();
    }
}

pub fn write_nfa(a: &Nfa) -> String {
    let mut out = String::new();
    write_header(&mut out, a);
    for &(p, x, q) in a.transitions() {
        writeln!(out, "trans {p} {x} {q}").unwrap();
    }
    out
}

pub fn write_weighted(w: &WeightedAutomaton) -> String {
    let mut out = String::new();
    write_header(&mut out, w.nfa());
    for (p, x, q, c) in w.weighted_transitions() {
        writeln!(out, "trans {p} {x} {q} {c}").unwrap();
    }
    out
}

pub fn write_automaton(a: &Automaton) -> String {
    match a {
        Automaton::Plain(a) => write_nfa(a),
        Automaton::Weighted(w) => write_weighted(w),
    }
}

pub fn parse_progressions(text: &str) -> Result<ProgressionsInstance> {
    let mut entries = Vec::new();
    let mut last_line = 1;
    for (line, toks) in records(text) {
        if toks[0] != "prog" || toks.len() < 2 {
            return err(line, "expected `prog <step> <base>...`");
        }
        let b: u64 = num(line, toks[1])?;
        let bases: Vec<u64> = nums(line, &toks[2..])?;
        entries.push((b, bases));
        last_line = line;
        // Validate incrementally so errors point at the offending line.
        ProgressionsInstance::new(entries.clone()).or_else(|e| err(line, e.to_string()))?;
    }
    ProgressionsInstance::new(entries).or_else(|e| err(last_line, e.to_string()))
}

pub fn write_progressions(inst: &ProgressionsInstance) -> String {
    let mut out = String::new();
    for (b, bases) in inst.entries() {
        write!(out, "prog {b}").unwrap();
        for a in bases {
            write!(out, " {a}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_ov(text: &str) -> Result<OvInstance> {
    let mut recs = records(text);
    let Some((line, toks)) = recs.next() else { return err(1, "empty OV file") };
    if toks[0] != "ov" {
        return err(line, "expected `ov <k> <n> <d>`");
    }
    expect_args(line, &toks, 3)?;
    let (k, n, d): (usize, usize, usize) = (num(line, toks[1])?, num(line, toks[2])?, num(line, toks[3])?);
    let mut sets = vec![Vec::with_capacity(n); k];
    let mut count = 0;
    for (line, toks) in recs {
        if toks.len() != 1 || toks[0].len() != d || !toks[0].bytes().all(|b| b == b'0' || b == b'1') {
            return err(line, format!("expected a bit string of length {d}"));
        }
        if count == k * n {
            return err(line, format!("more than {} vectors", k * n));
        }
        sets[count / n.max(1)].push(toks[0].bytes().map(|b| b == b'1').collect());
        count += 1;
    }
    if count != k * n {
        return err(line, format!("expected {} vectors, found {count}", k * n));
    }
    OvInstance::new(k, d, sets).or_else(|e| err(line, e.to_string()))
}

pub fn write_ov(ov: &OvInstance) -> String {
    let mut out = format!("ov {} {} {}\n", ov.k(), ov.n(), ov.d());
    for set in ov.sets() {
        for v in set {
            out.extend(v.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
    }
    out
}

pub fn parse_layers(text: &str) -> Result<LayeredGraph> {
    let mut recs = records(text);
    let Some((line, toks)) = recs.next() else { return err(1, "empty layered-graph file") };
    if toks[0] != "layers" {
        return err(line, "expected `layers <k> <n>`");
    }
    expect_args(line, &toks, 2)?;
    let (k, n): (usize, usize) = (num(line, toks[1])?, num(line, toks[2])?);
    let mut edges = Vec::new();
    for (line, toks) in recs {
        if toks[0] != "edge" {
            return err(line, "expected `edge <layer> <i> <j>`");
        }
        expect_args(line, &toks, 3)?;
        let e: Vec<usize> = nums(line, &toks[1..])?;
        if e[0] >= k || e[1] >= n || e[2] >= n {
            return err(line, "edge out of range");
        }
        edges.push((e[0], e[1], e[2]));
    }
    LayeredGraph::new(k, n, edges).or_else(|e| err(line, e.to_string()))
}

pub fn write_layers(g: &LayeredGraph) -> String {
    let mut out = format!("layers {} {}\n", g.k(), g.n());
    for &(l, i, j) in g.edges() {
        writeln!(out, "edge {l} {i} {j}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn nfa_round_trip() {
        for a in [fixtures::a1(), fixtures::a2(), fixtures::a3(), fixtures::a4()] {
            let text = write_nfa(&a);
            assert_eq!(parse_automaton(&text).unwrap(), Automaton::Plain(a));
        }
    }

    #[test]
    fn weighted_round_trip_and_mixed_weights() {
        let w = fixtures::sibling_gadget(1, 2, 3, 4).to_weighted_automaton();
        let text = write_weighted(&w);
        assert_eq!(parse_automaton(&text).unwrap(), Automaton::Weighted(w));
        let mixed = "nfa 2 1\ninitial 0\nfinal 1\ntrans 0 0 1 5\ntrans 1 0 1\n";
        assert_eq!(
            parse_automaton(mixed),
            Err(Error::Parse { line: 5, msg: "missing weight (other transitions are weighted)".into() })
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "# header\nnfa 2 1\ninitial 0\n\ntrans 0 3 1\n";
        match parse_automaton(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_automaton("trans 0 0 0"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn comments_and_duplicates() {
        let text = "nfa 2 1 # two states\ninitial 0\nfinal 1\ntrans 0 0 1\ntrans 0 0 1\n";
        assert_eq!(parse_automaton(text).unwrap().nfa().transitions().len(), 1);
    }

    #[test]
    fn several_automata_in_one_file() {
        let text = format!("{}{}", write_nfa(&fixtures::a1()), write_nfa(&fixtures::a3()));
        assert_eq!(parse_automata(&text).unwrap().len(), 2);
    }

    #[test]
    fn progressions_round_trip() {
        let inst = fixtures::two_cycle_progressions();
        assert_eq!(parse_progressions(&write_progressions(&inst)).unwrap(), inst);
        assert!(matches!(parse_progressions("prog 3 0\nprog 2 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn ov_and_layers_round_trip() {
        let ov = fixtures::small_ov();
        assert_eq!(parse_ov(&write_ov(&ov)).unwrap(), ov);
        let g = fixtures::three_layer_graph();
        assert_eq!(parse_layers(&write_layers(&g)).unwrap(), g);
        assert!(parse_ov("ov 2 1 3\n010\n01\n").is_err());
    }
}
