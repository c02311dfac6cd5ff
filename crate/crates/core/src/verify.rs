//! Brute-force oracles, published size tables and growth probes.

use std::fmt;

use crate::automata::{Automaton, Dfa, Dfao, Letter, StateId};
use crate::error::{Error, Result};
use crate::numeration::{encode, fibonacci};
use crate::relations;
use crate::subsequences::{fib_word, linear_subseq};

/// A relation between numbers, the last argument determined by the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `[x] + c = [y]`
    AddConst(u64),
    /// `[x] − c = [y]`
    SubConst(u64),
    /// `n[x] + c = [y]`
    Affine(u64, u64),
    /// `[x] + [y] = [z]`
    Adder,
    /// `[x] = c`
    EqConst(u64),
}

impl Relation {
    pub fn arity(&self) -> usize {
        match self {
            Relation::EqConst(_) => 1,
            Relation::Adder => 3,
            _ => 2,
        }
    }

    /// The last argument as a function of the others, if defined.
    fn apply(&self, args: &[u64]) -> Option<u64> {
        match *self {
            Relation::AddConst(c) => Some(args[0] + c),
            Relation::SubConst(c) => args[0].checked_sub(c),
            Relation::Affine(n, c) => Some(n * args[0] + c),
            Relation::Adder => Some(args[0] + args[1]),
            Relation::EqConst(c) => Some(c),
        }
    }
}

/// A sequence defined by digit arithmetic on `encode(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequence {
    /// Last digit.
    FibWord,
    /// Parity of the number of 1s.
    FibThueMorse,
    /// `i ↦ s(i + c)`
    Shift(Box<Sequence>, u64),
    /// `i ↦ s(n·i + c)`
    Linear(Box<Sequence>, u64, u64),
}

impl Sequence {
    pub fn value(&self, i: u64) -> Letter {
        match self {
            Sequence::FibWord => encode(i).last().unwrap_or(0) as Letter,
            Sequence::FibThueMorse => {
                (encode(i).digits().iter().filter(|&&d| d == 1).count() % 2) as Letter
            }
            Sequence::Shift(s, c) => s.value(i + c),
            Sequence::Linear(s, n, c) => s.value(n * i + c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Relation(Relation),
    Sequence(Sequence),
}

/// What to check and how far: all arguments below `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    pub kind: OracleKind,
    pub bound: u64,
}

impl OracleSpec {
    pub fn relation(r: Relation, bound: u64) -> OracleSpec {
        OracleSpec {
            kind: OracleKind::Relation(r),
            bound,
        }
    }

    pub fn sequence(s: Sequence, bound: u64) -> OracleSpec {
        OracleSpec {
            kind: OracleKind::Sequence(s),
            bound,
        }
    }
}

/// Outcome of an oracle comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of inputs (argument tuples or sequence indices) examined.
    pub checked: u64,
    /// Smallest disagreement in (max value, lexicographic) order: the
    /// argument tuple, and whether the automaton accepted it. For sequences
    /// the index, expected and produced letter.
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    Tuple {
        values: Vec<u64>,
        accepted: bool,
    },
    Index {
        index: u64,
        expected: Letter,
        found: Option<Letter>,
    },
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "result={} checked={}",
            if self.passed() { "pass" } else { "fail" },
            self.checked
        )?;
        match &self.counterexample {
            None => Ok(()),
            Some(Counterexample::Tuple { values, accepted }) => {
                let vs: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, " counterexample={} accepted={accepted}", vs.join(","))
            }
            Some(Counterexample::Index {
                index,
                expected,
                found,
            }) => {
                let found = found.map_or("none".to_string(), |l| l.to_string());
                write!(f, " index={index} expected={expected} found={found}")
            }
        }
    }
}

/// Values of all valid words `w` of length `len` on the last track such that
/// `dfa` accepts `fixed × w`; `fixed` rows are padded to `len`.
fn free_track_values(dfa: &Dfa, fixed: &[Vec<u8>], len: usize) -> Vec<u64> {
    let arity = dfa.arity();
    let mut out = Vec::new();
    // depth-first over (position, state, previous free digit, value so far)
    let mut stack: Vec<(usize, StateId, u8, u64)> = vec![(0, dfa.initial(), 0, 0)];
    while let Some((pos, q, prev, val)) = stack.pop() {
        if pos == len {
            if dfa.is_accepting(q) {
                out.push(val);
            }
            continue;
        }
        let mut base = 0usize;
        for row in fixed {
            base = (base << 1) | row[pos] as usize;
        }
        base <<= 1;
        for b in 0..2u8 {
            if prev & b == 1 {
                continue;
            }
            if let Some(t) = dfa.next(q, base | b as usize) {
                let w = if b == 1 { fibonacci(len - pos + 1) } else { 0 };
                stack.push((pos + 1, t, b, val + w));
            }
        }
    }
    debug_assert_eq!(arity, fixed.len() + 1);
    out
}

fn padded(v: u64, len: usize) -> Vec<u8> {
    encode(v).padded(len).digits().to_vec()
}

fn check_relation(dfa: &Dfa, r: &Relation, bound: u64) -> Result<OracleReport> {
    if dfa.arity() != r.arity() {
        return Err(Error::Arity {
            expected: r.arity(),
            found: dfa.arity(),
        });
    }
    let mut worst: Option<(Vec<u64>, bool)> = None;
    let mut consider = |values: Vec<u64>, accepted: bool| {
        let key = |v: &Vec<u64>| (v.iter().copied().max().unwrap_or(0), v.clone());
        if worst.as_ref().is_none_or(|(w, _)| key(&values) < key(w)) {
            worst = Some((values, accepted));
        }
    };
    let mut checked = 0;

    if let Relation::EqConst(c) = *r {
        for x in 0..bound {
            checked += 1;
            let syms: Vec<usize> = encode(x).digits().iter().map(|&d| d as usize).collect();
            let acc = dfa.accepts_symbols(&syms);
            if acc != (x == c) {
                consider(vec![x], acc);
            }
        }
    } else {
        let free_args = r.arity() - 1;
        let mut args = vec![0u64; free_args];
        let top = encode(bound.saturating_sub(1)).len();
        loop {
            checked += 1;
            let expected = r.apply(&args);
            let natural = args
                .iter()
                .chain(expected.iter())
                .map(|&v| encode(v).len())
                .max()
                .unwrap_or(0);
            // the unpadded length, and one beyond every value in range
            for len in [natural, natural.max(top) + 1] {
                let rows: Vec<Vec<u8>> = args.iter().map(|&v| padded(v, len)).collect();
                let found = free_track_values(dfa, &rows, len);
                if let Some(e) = expected {
                    if encode(e).len() <= len && !found.contains(&e) {
                        let mut v = args.clone();
                        v.push(e);
                        consider(v, false);
                    }
                }
                for y in found {
                    if Some(y) != expected {
                        let mut v = args.clone();
                        v.push(y);
                        consider(v, true);
                    }
                }
            }
            // odometer over the fixed arguments
            let mut i = free_args;
            loop {
                if i == 0 {
                    let counterexample =
                        worst.map(|(values, accepted)| Counterexample::Tuple { values, accepted });
                    return Ok(OracleReport {
                        checked,
                        counterexample,
                    });
                }
                i -= 1;
                args[i] += 1;
                if args[i] < bound {
                    break;
                }
                args[i] = 0;
            }
        }
    }
    Ok(OracleReport {
        checked,
        counterexample: worst.map(|(values, accepted)| Counterexample::Tuple { values, accepted }),
    })
}

fn check_sequence(dfao: &Dfao, s: &Sequence, bound: u64) -> Result<OracleReport> {
    if dfao.arity() != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: dfao.arity(),
        });
    }
    for i in 0..bound {
        let expected = s.value(i);
        let found = dfao.eval(i).ok();
        if found != Some(expected) {
            return Ok(OracleReport {
                checked: i + 1,
                counterexample: Some(Counterexample::Index {
                    index: i,
                    expected,
                    found,
                }),
            });
        }
    }
    Ok(OracleReport {
        checked: bound,
        counterexample: None,
    })
}

/// Compares `automaton` with the arithmetic behind `spec` on every input
/// below the bound.
///
/// For relations whose last argument is a function of the others, every
/// valid word on the last track is explored for each choice of the others,
/// so accepted tuples whose last value exceeds the bound are caught too.
/// This runs at the shortest common length and again with leading zeros.
pub fn oracle_check(automaton: &Automaton, spec: &OracleSpec) -> Result<OracleReport> {
    if spec.bound == 0 {
        return Err(Error::Parameter("bound must be at least 1".into()));
    }
    match (automaton, &spec.kind) {
        (Automaton::Dfa(d), OracleKind::Relation(r)) => check_relation(d, r, spec.bound),
        (Automaton::Dfao(d), OracleKind::Sequence(s)) => check_sequence(d, s, spec.bound),
        (Automaton::Dfa(_), OracleKind::Sequence(_)) => Err(Error::Parameter(
            "a sequence oracle needs an automaton with output".into(),
        )),
        (Automaton::Dfao(_), OracleKind::Relation(_)) => Err(Error::Parameter(
            "a relation oracle needs an accepting automaton".into(),
        )),
    }
}

/// Published state counts next to measured ones, for `n = 1..=10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisTable {
    pub id: &'static str,
    pub expected: Vec<u64>,
    pub measured: Vec<u64>,
}

impl OeisTable {
    /// Indices `n` (1-based) where measurement and table differ.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..self.expected.len())
            .filter(|&i| self.measured.get(i) != Some(&self.expected[i]))
            .map(|i| i + 1)
            .collect()
    }

    pub fn matches(&self) -> bool {
        self.mismatches().is_empty()
    }
}

impl fmt::Display for OeisTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.id)?;
        writeln!(f, "n expected measured")?;
        for (i, e) in self.expected.iter().enumerate() {
            let m = self.measured.get(i).map_or("-".to_string(), u64::to_string);
            let mark = if self.measured.get(i) == Some(e) {
                "ok"
            } else {
                "MISMATCH"
            };
            writeln!(f, "{} {e} {m} {mark}", i + 1)?;
        }
        Ok(())
    }
}

/// States of the minimal recognizer of `[y] = n[x]`, `n = 1..=10`.
///
/// The count for `n = 1` is 2: restricted to valid words, equality must
/// remember whether the last column was `[1, 1]`.
pub fn oeis_a372846() -> Result<OeisTable> {
    let measured = (1..=10)
        .map(|n| Ok(relations::affine(n, 0)?.num_states() as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(OeisTable {
        id: "A372846",
        expected: vec![2, 10, 23, 40, 59, 85, 114, 146, 181, 224],
        measured,
    })
}

/// States of the minimal DFAO for `i ↦ f(n·i)`, `f` the Fibonacci word,
/// `n = 1..=10`.
pub fn oeis_a385021() -> Result<OeisTable> {
    let f = fib_word();
    let measured = (1..=10)
        .map(|n| Ok(linear_subseq(&f, n, 0)?.num_states() as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(OeisTable {
        id: "A385021",
        expected: vec![2, 5, 10, 17, 27, 36, 52, 65, 78, 103],
        measured,
    })
}

/// Reference growth functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeModel {
    /// `log₂(p + 2)`
    Log,
    Linear,
    Quadratic,
    Quartic,
}

impl SizeModel {
    pub fn eval(self, p: u64) -> f64 {
        let p = p as f64;
        match self {
            SizeModel::Log => (p + 2.0).log2(),
            SizeModel::Linear => p,
            SizeModel::Quadratic => p * p,
            SizeModel::Quartic => p.powi(4),
        }
    }
}

/// Sizes divided by the model, per parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub model: SizeModel,
    /// (parameter, size, size / model(parameter))
    pub samples: Vec<(u64, usize, f64)>,
}

impl GrowthReport {
    pub fn max_ratio(&self) -> f64 {
        self.samples.iter().map(|s| s.2).fold(0.0, f64::max)
    }
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, size, ratio) in &self.samples {
            writeln!(f, "param={p} size={size} ratio={ratio:.4}")?;
        }
        writeln!(f, "max_ratio={:.4}", self.max_ratio())
    }
}

/// Measures `size_of(p)` for each parameter. Needs at least 4 parameters,
/// all with a positive model value.
pub fn growth_probe(
    params: &[u64],
    model: SizeModel,
    mut size_of: impl FnMut(u64) -> Result<usize>,
) -> Result<GrowthReport> {
    if params.len() < 4 {
        return Err(Error::Parameter(
            "growth probe needs at least 4 samples".into(),
        ));
    }
    let mut samples = Vec::with_capacity(params.len());
    for &p in params {
        let scale = model.eval(p);
        if scale <= 0.0 {
            return Err(Error::Parameter(format!("model vanishes at {p}")));
        }
        let size = size_of(p)?;
        samples.push((p, size, size as f64 / scale));
    }
    Ok(GrowthReport { model, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent, product, NONE};

    fn on_valid(d: &Dfa) -> Dfa {
        let a = d.arity();
        let tracks: Vec<usize> = (0..a).collect();
        product(d, &tracks, &Dfa::valid(a), &tracks, a).unwrap().dfa
    }

    fn rel(d: Dfa, r: Relation, bound: u64) -> OracleReport {
        oracle_check(&Automaton::Dfa(d), &OracleSpec::relation(r, bound)).unwrap()
    }

    #[test]
    fn shipped_relations_pass() {
        assert!(rel(
            relations::affine(2, 0).unwrap(),
            Relation::Affine(2, 0),
            2000
        )
        .passed());
        assert!(rel(relations::sub_const(3), Relation::SubConst(3), 500).passed());
        assert!(rel(relations::eq_const(6), Relation::EqConst(6), 500).passed());
        let r = rel(relations::adder(), Relation::Adder, 200);
        assert!(r.passed());
        assert_eq!(r.checked, 40_000);
    }

    #[test]
    fn wrong_relation_fails_with_smallest_counterexample() {
        let r = rel(relations::add_const(2), Relation::AddConst(1), 100);
        assert_eq!(
            r.counterexample,
            Some(Counterexample::Tuple {
                values: vec![0, 1],
                accepted: false
            })
        );
        assert!(r.to_string().starts_with("result=fail"));
    }

    #[test]
    fn validity_automaton() {
        let v = Dfa::valid(2);
        assert!(v.accepts_symbols(&[0b10, 0b01, 0b10]));
        assert!(!v.accepts_symbols(&[0b10, 0b11]));
    }

    // redirections that only change the verdict on invalid words are not faults
    #[test]
    fn every_single_redirection_is_caught() {
        for (d, r) in [
            (relations::add_const(5), Relation::AddConst(5)),
            (relations::affine(3, 1).unwrap(), Relation::Affine(3, 1)),
        ] {
            let k = 4;
            for q in 0..d.num_states() as StateId {
                for s in 0..k {
                    let old = d.delta()[q as usize * k + s];
                    if old == NONE {
                        continue;
                    }
                    for t in 0..d.num_states() as StateId {
                        if t == old {
                            continue;
                        }
                        let bad = d.with_transition(q, s, t).unwrap();
                        if equivalent(&on_valid(&bad), &on_valid(&d)).unwrap() {
                            continue;
                        }
                        assert!(!rel(bad, r.clone(), 2000).passed(), "{r:?}: {q} {s} -> {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn sequence_oracle() {
        let spec = OracleSpec::sequence(Sequence::Linear(Box::new(Sequence::FibWord), 2, 0), 1000);
        let m = linear_subseq(&fib_word(), 2, 0).unwrap();
        assert!(oracle_check(&Automaton::Dfao(m), &spec).unwrap().passed());
        let r = oracle_check(&Automaton::Dfao(fib_word()), &spec).unwrap();
        assert_eq!(
            r.counterexample,
            Some(Counterexample::Index {
                index: 1,
                expected: 0,
                found: Some(1)
            })
        );
        assert!(oracle_check(&Automaton::Dfa(Dfa::universal(1)), &spec).is_err());
    }

    #[test]
    fn published_tables() {
        let a = oeis_a385021().unwrap();
        assert!(a.matches(), "{a}");
        assert_eq!(a.measured[6], 52);
    }

    #[test]
    fn growth_needs_samples() {
        assert!(growth_probe(&[1, 2, 3], SizeModel::Linear, |p| Ok(p as usize)).is_err());
        let g = growth_probe(
            &[1, 2, 3, 4],
            SizeModel::Quadratic,
            |p| Ok((p * p) as usize),
        )
        .unwrap();
        assert_eq!(g.max_ratio(), 1.0);
    }
}
