//! Involution, composition, and the group of single-segment shuffles.

use std::collections::HashMap;

use thiserror::Error;

use crate::address::{address_of, AddressError};
use crate::enumerate::verify;
use crate::expr::{EvalError, SegmentExpr, Var};
use crate::ordinal::Orientation;
use crate::shuffle::{Component, Composed, IndexDomain, Shuffle, ShuffleError, Table, TableTail, ValueMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("both operands must have the same sign")]
    SignMismatch,
    #[error("composition needs bench-free operands whose innermost domain is infinite")]
    BenchPresent,
    #[error("composition is defined for single-component operands only")]
    MultiComponentUnsupported,
    #[error("{0} is not supported for omega-families")]
    Unsupported(&'static str),
    #[error("not a single-segment element: {0}")]
    NotSingleSegment(String),
    #[error("the element is not a bijection up to {n}: {detail}")]
    NotVerified { n: u64, detail: String },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error(transparent)]
    Address(#[from] AddressError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

fn involute_component(c: &Component) -> Component {
    let domains = c.domains().iter().map(IndexDomain::negate).collect();
    let value = match c.value() {
        ValueMap::Expr(e) => ValueMap::Expr(e.substitute(&|v| match v {
            Var::Index(_) => Some(SegmentExpr::negate(SegmentExpr::Var(v))),
            Var::Component => None,
        })),
        ValueMap::Table(t) => ValueMap::Table(Table { sign: t.sign.flip(), ..t.clone() }),
        ValueMap::Composed(k) => ValueMap::Composed(Box::new(Composed {
            outer: involute_component(&k.outer),
            inner: involute_component(&k.inner),
            anchor: -k.anchor,
            sign: k.sign.flip(),
        })),
    };
    Component::new(domains, value).expect("negation preserves validity")
}

/// Negates every index and domain and reverses the component order, so
/// that the induced order is reversed.
pub fn involution(s: &Shuffle) -> Result<Shuffle, AlgebraError> {
    if s.family().is_some() {
        return Err(AlgebraError::Unsupported("the involution"));
    }
    let components = s.components().iter().rev().map(involute_component).collect();
    Ok(Shuffle::new(format!("{}*", s.label()), components, None)?)
}

fn single(s: &Shuffle) -> Result<&Component, AlgebraError> {
    match (s.components(), s.family()) {
        ([c], None) => Ok(c),
        _ => Err(AlgebraError::MultiComponentUnsupported),
    }
}

/// `S∘U`: each innermost segment of `S` is replaced by a copy of `U`.
pub fn compose(s: &Shuffle, u: &Shuffle) -> Result<Shuffle, AlgebraError> {
    let (cs, cu) = (single(s)?, single(u)?);
    let last = |c: &Component| *c.domains().last().expect("components have domains");
    let (ls, lu) = (last(cs), last(cu));
    let (Some(eps), Some(eu)) = (ls.orientation(), lu.orientation()) else {
        return Err(AlgebraError::BenchPresent);
    };
    if eps != eu {
        return Err(AlgebraError::SignMismatch);
    }
    let split = cs.arity() - 1;
    let anchor = ls.anchor();
    let mut domains = cs.domains()[..split].to_vec();
    domains.extend_from_slice(cu.domains());
    let value = match (cs.value(), cu.value()) {
        (ValueMap::Expr(es), ValueMap::Expr(eu)) => {
            let shifted = eu.substitute(&|v| match v {
                Var::Index(j) => Some(SegmentExpr::var(split + j)),
                Var::Component => Some(SegmentExpr::int(0)),
            });
            let signed = match eps {
                Orientation::Plus => shifted,
                Orientation::Minus => SegmentExpr::negate(shifted),
            };
            let arg = if anchor == 0 { signed } else { SegmentExpr::add(SegmentExpr::int(anchor as i128), signed) };
            ValueMap::Expr(es.substitute(&|v| match v {
                Var::Index(k) if k == split => Some(arg.clone()),
                Var::Component => Some(SegmentExpr::int(0)),
                _ => None,
            }))
        }
        _ => ValueMap::Composed(Box::new(Composed { outer: cs.clone(), inner: cu.clone(), anchor, sign: eps })),
    };
    let component = Component::new(domains, value)?;
    Ok(Shuffle::single(format!("{}∘{}", s.label(), u.label()), component))
}

/// A single-segment shuffle read as a map `π` on positions:
/// `π(k)` is the value at index `anchor + ε·k`.
#[derive(Debug, Clone, PartialEq)]
pub struct I1Element {
    shuffle: Shuffle,
    sign: Orientation,
    anchor: i64,
}

impl I1Element {
    pub fn new(shuffle: Shuffle) -> Result<Self, AlgebraError> {
        let c = single(&shuffle).map_err(|_| AlgebraError::NotSingleSegment(shuffle.label().to_string()))?;
        match c.domains() {
            [d] if d.orientation().is_some() => {
                let (sign, anchor) = (d.orientation().unwrap(), d.anchor());
                Ok(I1Element { shuffle, sign, anchor })
            }
            _ => Err(AlgebraError::NotSingleSegment(shuffle.label().to_string())),
        }
    }

    pub fn shuffle(&self) -> &Shuffle {
        &self.shuffle
    }

    pub fn into_shuffle(self) -> Shuffle {
        self.shuffle
    }

    pub fn sign(&self) -> Orientation {
        self.sign
    }

    pub fn index_of(&self, k: u64) -> i64 {
        self.anchor + self.sign.factor() * k as i64
    }

    pub fn position_of_index(&self, index: i64) -> u64 {
        ((index - self.anchor) * self.sign.factor()) as u64
    }

    pub fn at(&self, k: u64) -> Result<u64, AlgebraError> {
        let v = self.shuffle.eval(0, &[self.index_of(k)])?;
        u64::try_from(v).map_err(|_| AlgebraError::Address(AddressError::NotNatural(v)))
    }

    pub fn compose(&self, other: &I1Element) -> Result<I1Element, AlgebraError> {
        I1Element::new(compose(&self.shuffle, &other.shuffle)?)
    }

    /// The first `n + 1` values, or the first failing position.
    pub fn prefix(&self, n: u64) -> Result<Vec<u64>, (u64, AlgebraError)> {
        (0..=n).map(|k| self.at(k).map_err(|e| (k, e))).collect()
    }
}

pub fn identity_element(sign: Orientation) -> I1Element {
    let (domain, text) = match sign {
        Orientation::Plus => (IndexDomain::PLUS, "i0"),
        Orientation::Minus => (IndexDomain::MINUS, "-i0"),
    };
    let c = Component::parse(vec![domain], text, false).expect("identity parses");
    I1Element::new(Shuffle::single(format!("id{sign}"), c)).expect("identity is single-segment")
}

fn is_permutation(values: &[u64]) -> bool {
    let mut seen = vec![false; values.len()];
    for &v in values {
        match seen.get_mut(v as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return false,
        }
    }
    true
}

fn table_element(label: String, values: Vec<u64>, tail: TableTail, sign: Orientation) -> I1Element {
    let c = Component::table(Table { values, tail, sign }).expect("tables are valid");
    I1Element::new(Shuffle::single(label, c)).expect("tables are single-segment")
}

/// `(π(0), ..., π(n-1), n, n+1, ...)` as a table with identity tail.
pub fn from_finite_permutation(perm: &[u64], sign: Orientation) -> Result<I1Element, AlgebraError> {
    if !is_permutation(perm) {
        return Err(AlgebraError::NotAPermutation(perm.len()));
    }
    Ok(table_element(format!("perm{perm:?}"), perm.to_vec(), TableTail::Identity, sign))
}

/// A table-backed inverse `ρ` with `ρ(π(i)) = i` for every `i <= n`, and
/// `π(ρ(x)) = x` for every `x <= n`.
pub fn invert_i1(s: &I1Element, n: u64, budget: u64) -> Result<I1Element, AlgebraError> {
    if let ValueMap::Table(t) = s.shuffle.components()[0].value() {
        if t.tail == TableTail::Identity && is_permutation(&t.values) && s.anchor == 0 {
            let mut inv = vec![0; t.values.len()];
            for (k, &v) in t.values.iter().enumerate() {
                inv[v as usize] = k as u64;
            }
            return Ok(table_element(format!("{}^-1", s.shuffle.label()), inv, TableTail::Identity, s.sign));
        }
    }
    let report = verify(&s.shuffle, n, budget);
    if !report.is_member() {
        let detail = match (report.missing.first(), report.duplicates.first()) {
            (Some(m), _) => format!("{m} missing"),
            (None, Some((v, a, b))) => format!("{v} at {a} and {b}"),
            _ => unreachable!(),
        };
        return Err(AlgebraError::NotVerified { n, detail });
    }
    let head = s.prefix(n).map_err(|(_, e)| e)?;
    let top = head.iter().copied().max().unwrap_or(0).max(n);
    let values = (0..=top)
        .map(|x| {
            let a = address_of(&s.shuffle, x, budget)?;
            Ok(s.position_of_index(a.indices[0]))
        })
        .collect::<Result<Vec<u64>, AlgebraError>>()?;
    Ok(table_element(format!("{}^-1", s.shuffle.label()), values, TableTail::None, s.sign))
}

/// Violations found by [`group_check`], one message per witness.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupReport {
    pub n: u64,
    pub elements: Vec<String>,
    pub closure: Vec<String>,
    pub associativity: Vec<String>,
    pub identity: Vec<String>,
    pub inverse: Vec<String>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.elements.is_empty()
            && self.closure.is_empty()
            && self.associativity.is_empty()
            && self.identity.is_empty()
            && self.inverse.is_empty()
    }
}

fn first_difference(a: &I1Element, b: &I1Element, n: u64) -> Option<String> {
    for k in 0..=n {
        match (a.at(k), b.at(k)) {
            (Ok(x), Ok(y)) if x == y => {}
            (x, y) => return Some(format!("position {k}: {x:?} vs {y:?}")),
        }
    }
    None
}

fn bijection_witness(e: &I1Element, n: u64, budget: u64) -> Option<String> {
    let r = verify(e.shuffle(), n, budget);
    if let Some(m) = r.missing.first() {
        return Some(format!("{m} missing"));
    }
    r.duplicates.first().map(|(v, a, b)| format!("{v} at {a} and {b}"))
}

/// Checks the group axioms pointwise on positions `0..=n`.
pub fn group_check(elements: &[I1Element], n: u64, budget: u64) -> GroupReport {
    let mut report = GroupReport { n, ..GroupReport::default() };
    let Some(sign) = elements.first().map(I1Element::sign) else { return report };
    if let Some(e) = elements.iter().find(|e| e.sign() != sign) {
        report.elements.push(format!("{}: sign {} differs", e.shuffle().label(), e.sign()));
        return report;
    }
    for e in elements {
        if let Some(w) = bijection_witness(e, n, budget) {
            report.elements.push(format!("{}: {w}", e.shuffle().label()));
        }
    }
    let mut products: HashMap<(usize, usize), I1Element> = HashMap::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            match a.compose(b) {
                Ok(ab) => {
                    if let Some(w) = bijection_witness(&ab, n, budget) {
                        report.closure.push(format!("{}: {w}", ab.shuffle().label()));
                    }
                    products.insert((i, j), ab);
                }
                Err(e) => report.closure.push(format!("{}∘{}: {e}", a.shuffle().label(), b.shuffle().label())),
            }
        }
    }
    let len = elements.len();
    for i in 0..len {
        for j in 0..len {
            for k in 0..len {
                let (Some(ab), Some(bc)) = (products.get(&(i, j)), products.get(&(j, k))) else { continue };
                let left = ab.compose(&elements[k]);
                let right = elements[i].compose(bc);
                let label = || format!("({i},{j},{k})");
                match (left, right) {
                    (Ok(l), Ok(r)) => {
                        if let Some(w) = first_difference(&l, &r, n) {
                            report.associativity.push(format!("{}: {w}", label()));
                        }
                    }
                    (l, r) => report.associativity.push(format!("{}: {:?} / {:?}", label(), l.err(), r.err())),
                }
            }
        }
    }
    let id = identity_element(sign);
    for e in elements {
        for (side, prod) in [("id∘", id.compose(e)), ("∘id", e.compose(&id))] {
            match prod {
                Ok(p) => {
                    if let Some(w) = first_difference(&p, e, n) {
                        report.identity.push(format!("{side} {}: {w}", e.shuffle().label()));
                    }
                }
                Err(err) => report.identity.push(format!("{side} {}: {err}", e.shuffle().label())),
            }
        }
        match invert_i1(e, n, budget) {
            Ok(inv) => {
                for prod in [e.compose(&inv), inv.compose(e)] {
                    match prod {
                        Ok(p) => {
                            if let Some(w) = first_difference(&p, &id, n) {
                                report.inverse.push(format!("{}: {w}", p.shuffle().label()));
                            }
                        }
                        Err(err) => report.inverse.push(format!("{}: {err}", e.shuffle().label())),
                    }
                }
            }
            Err(err) => report.inverse.push(format!("{}: {err}", e.shuffle().label())),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::{precedes, value_at, Address};

    fn parse(domains: Vec<IndexDomain>, text: &str) -> Shuffle {
        Shuffle::single("s", Component::parse(domains, text, false).unwrap())
    }

    #[test]
    fn three_ladder_involution_values() {
        let s = parse(vec![IndexDomain::FinitePrefix(3), IndexDomain::PLUS], "3*i1+i0+1");
        let star = involution(&s).unwrap();
        for (idx, v) in [([0, 0], 1), ([0, -1], 4), ([-1, 0], 2), ([-1, -1], 5)] {
            assert_eq!(value_at(&star, &Address::new(0, idx.to_vec())).unwrap(), v);
        }
        assert_eq!(star.sign().components, vec![crate::shuffle::Sign::Minus]);
        assert_eq!(involution(&star).unwrap().components(), s.components());
        for (x, y) in [(11, 14), (14, 6)] {
            assert!(precedes(&s, x, y, 10_000).unwrap());
            assert!(precedes(&star, y, x, 10_000).unwrap());
        }
    }

    #[test]
    fn identity_involutes_to_reversal() {
        let id = identity_element(Orientation::Plus);
        let star = involution(id.shuffle()).unwrap();
        assert_eq!(star.components()[0].domains(), &[IndexDomain::MINUS]);
        assert_eq!(value_at(&star, &Address::new(0, vec![-4])).unwrap(), 4);
    }

    #[test]
    fn compose_rejects_bad_operands() {
        let plus = parse(vec![IndexDomain::PLUS], "i0");
        let minus = parse(vec![IndexDomain::MINUS], "-i0");
        let bench = parse(vec![IndexDomain::FinitePrefix(3)], "i0");
        assert_eq!(compose(&plus, &minus), Err(AlgebraError::SignMismatch));
        assert_eq!(compose(&plus, &bench), Err(AlgebraError::BenchPresent));
        let two = Shuffle::new("two", vec![plus.components()[0].clone(), bench.components()[0].clone()], None).unwrap();
        assert_eq!(compose(&two, &plus), Err(AlgebraError::MultiComponentUnsupported));
    }

    #[test]
    fn swap_composed_with_evens_odds() {
        let s = parse(vec![IndexDomain::PLUS], "i0 + (-1)^i0");
        let e = parse(vec![IndexDomain::FinitePrefix(2), IndexDomain::PLUS], "2*i1+i0");
        let r = compose(&s, &e).unwrap();
        for (idx, v) in [([0, 0], 1), ([0, 1], 3), ([1, 0], 0), ([1, 1], 2)] {
            assert_eq!(value_at(&r, &Address::new(0, idx.to_vec())).unwrap(), v);
        }
        assert_eq!(r.order_type().unwrap().to_string(), "w*2");
    }

    #[test]
    fn permutation_embedding() {
        let p = from_finite_permutation(&[1, 0], Orientation::Plus).unwrap();
        assert_eq!(p.prefix(4).unwrap(), vec![1, 0, 2, 3, 4]);
        assert_eq!(from_finite_permutation(&[0, 0], Orientation::Plus), Err(AlgebraError::NotAPermutation(2)));
        let id = from_finite_permutation(&[0], Orientation::Plus).unwrap();
        assert_eq!(first_difference(&id, &identity_element(Orientation::Plus), 50), None);
        let m = from_finite_permutation(&[2, 0, 1], Orientation::Minus).unwrap();
        assert_eq!(m.prefix(4).unwrap(), vec![2, 0, 1, 3, 4]);
    }

    #[test]
    fn inverse_of_swap_is_swap() {
        let s = I1Element::new(parse(vec![IndexDomain::PLUS], "i0 + (-1)^i0")).unwrap();
        let inv = invert_i1(&s, 100, 100_000).unwrap();
        assert_eq!(inv.prefix(100).unwrap(), s.prefix(100).unwrap());
        let id = identity_element(Orientation::Plus);
        assert_eq!(first_difference(&s.compose(&inv).unwrap(), &id, 100), None);
        let doubled = I1Element::new(parse(vec![IndexDomain::PLUS], "2*i0")).unwrap();
        assert!(matches!(invert_i1(&doubled, 10, 10_000), Err(AlgebraError::NotVerified { .. })));
    }

    #[test]
    fn group_check_flags_non_injective_candidates() {
        let id = identity_element(Orientation::Plus);
        assert!(group_check(std::slice::from_ref(&id), 50, 10_000).passed());
        let doubled = I1Element::new(parse(vec![IndexDomain::PLUS], "2*i0")).unwrap();
        let report = group_check(&[id, doubled], 50, 10_000);
        assert!(!report.passed());
        assert!(report.closure.iter().any(|w| w.contains("1 missing")), "{:?}", report.closure);
    }
}
