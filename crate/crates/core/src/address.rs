//! Addresses of naturals inside a shuffle and the order they induce.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use thiserror::Error;

use crate::enumerate::{natural, Dovetail};
use crate::expr::EvalError;
use crate::shuffle::{Shape, Shuffle};

/// `(t, i1, ..., ik)`. Ordered lexicographically on the flattened tuple,
/// a strict prefix preceding its extensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Address {
    pub component: u64,
    pub indices: Vec<i64>,
}

impl Address {
    pub fn new(component: u64, indices: Vec<i64>) -> Self {
        Address { component, indices }
    }
}

impl Ord for Address {
    fn cmp(&self, other: &Self) -> Ordering {
        self.component.cmp(&other.component).then_with(|| self.indices.cmp(&other.indices))
    }
}

impl PartialOrd for Address {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn lex_compare(a: &Address, b: &Address) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.component)?;
        for i in &self.indices {
            write!(f, ",{i}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse address `{0}`")]
pub struct AddressParseError(String);

impl FromStr for Address {
    type Err = AddressParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AddressParseError(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let mut parts = inner.split(',').map(str::trim);
        let component = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let indices = parts.map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        Ok(Address { component, indices })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddressError {
    #[error(
        "{value} not found within {budget_used} steps ({})",
        if *exhausted { "the enumeration is complete, so it is not in the support" } else { "it may be absent or need a larger budget" }
    )]
    NotFoundWithinBudget { value: u64, budget_used: u64, exhausted: bool },
    #[error("address {0} lies outside the declared domains")]
    DomainViolation(String),
    #[error("value {0} is not a natural number")]
    NotNatural(i128),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("order equivalence is only defined for strict uniform presentations")]
    GeneralizedShapeUnsupported,
}

#[derive(Debug)]
struct MemoState {
    walk: Dovetail,
    /// First hit per value, with the step that produced it.
    found: HashMap<u64, (Address, u64)>,
}

/// Per-shuffle cache of the dovetail search. A hit recorded at step `k`
/// answers queries with budget `> k`, so answers never depend on the
/// order of earlier queries.
#[derive(Debug, Default)]
pub(crate) struct AddressMemo(Mutex<Option<MemoState>>);

impl Clone for AddressMemo {
    fn clone(&self) -> Self {
        AddressMemo::default()
    }
}

pub fn address_of(s: &Shuffle, x: u64, budget: u64) -> Result<Address, AddressError> {
    let mut guard = s.memo.0.lock().unwrap_or_else(|p| p.into_inner());
    let state = guard.get_or_insert_with(|| MemoState { walk: Dovetail::new(s), found: HashMap::new() });
    if let Some((addr, step)) = state.found.get(&x) {
        if *step < budget {
            return Ok(addr.clone());
        }
        return Err(AddressError::NotFoundWithinBudget { value: x, budget_used: budget, exhausted: false });
    }
    while state.walk.steps() < budget {
        let Some((t, indices)) = state.walk.next() else { break };
        let step = state.walk.steps() - 1;
        if let Ok(v) = natural(s, t, &indices) {
            let hit = v == x;
            let entry = state.found.entry(v).or_insert_with(|| (Address::new(t, indices), step));
            if hit {
                return Ok(entry.0.clone());
            }
        }
    }
    Err(AddressError::NotFoundWithinBudget {
        value: x,
        budget_used: state.walk.steps().min(budget),
        exhausted: state.walk.is_exhausted(),
    })
}

pub fn value_at(s: &Shuffle, a: &Address) -> Result<u64, AddressError> {
    let component = s
        .component(a.component)
        .filter(|c| c.contains(&a.indices))
        .ok_or_else(|| AddressError::DomainViolation(a.to_string()))?;
    let v = component.eval(a.component, &a.indices)?;
    u64::try_from(v).map_err(|_| AddressError::NotNatural(v))
}

pub fn compare(s: &Shuffle, x: u64, y: u64, budget: u64) -> Result<Ordering, AddressError> {
    if x == y {
        return Ok(Ordering::Equal);
    }
    Ok(address_of(s, x, budget)?.cmp(&address_of(s, y, budget)?))
}

/// `x ≺ y` in the order induced by `s`.
pub fn precedes(s: &Shuffle, x: u64, y: u64, budget: u64) -> Result<bool, AddressError> {
    Ok(compare(s, x, y, budget)? == Ordering::Less)
}

pub fn sort_prefix(s: &Shuffle, xs: &[u64], budget: u64) -> Result<Vec<u64>, AddressError> {
    let mut keyed = xs.iter().map(|&x| Ok((address_of(s, x, budget)?, x))).collect::<Result<Vec<_>, AddressError>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, x)| x).collect())
}

/// The value one step further along the segment containing `x`, if the
/// segment continues.
pub fn segment_successor(s: &Shuffle, x: u64, budget: u64) -> Result<Option<u64>, AddressError> {
    let mut a = address_of(s, x, budget)?;
    let component = s.component(a.component).expect("found addresses name a component");
    let last = a.indices.len() - 1;
    let next = a.indices[last] + 1;
    if !component.domains()[last].contains(next) {
        return Ok(None);
    }
    a.indices[last] = next;
    value_at(s, &a).map(Some)
}

/// Equal degree and sign descriptors (finite domain sizes included).
pub fn order_equivalent(a: &Shuffle, b: &Shuffle) -> Result<bool, AddressError> {
    let strict = |s: &Shuffle| s.components().iter().chain(s.family()).all(|c| c.shape() == Shape::StrictUniform);
    if !strict(a) || !strict(b) {
        return Err(AddressError::GeneralizedShapeUnsupported);
    }
    Ok(a.degree() == b.degree() && a.sign() == b.sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn addr(t: u64, idx: &[i64]) -> Address {
        Address::new(t, idx.to_vec())
    }

    #[test]
    fn lexicographic_examples() {
        assert!(addr(0, &[4]) < addr(0, &[11]));
        assert!(addr(0, &[11]) < addr(1, &[2]));
        assert!(addr(1, &[2]) < addr(1, &[10]));
        assert!(addr(0, &[2]) < addr(1, &[-2, -3]));
        assert!(addr(1, &[-2, -3]) < addr(1, &[-1, -7]));
        assert!(addr(1, &[-1, -7]) < addr(1, &[-1, -1]));
        assert!(addr(1, &[3]) < addr(1, &[3, 5]));
        assert_eq!(lex_compare(&addr(2, &[-1]), &addr(2, &[-1])), Ordering::Equal);
    }

    #[test]
    fn parse_and_render() {
        let a: Address = " (1, -3,-4) ".parse().unwrap();
        assert_eq!(a, addr(1, &[-3, -4]));
        assert_eq!(a.to_string(), "(1,-3,-4)");
        assert_eq!("(7)".parse::<Address>().unwrap(), addr(7, &[]));
        for bad in ["", "()", "(1,", "1,2", "(-1,2)", "(1,x)"] {
            assert!(bad.parse::<Address>().is_err(), "{bad}");
        }
    }

    fn flat(a: &Address) -> Vec<i128> {
        std::iter::once(a.component as i128).chain(a.indices.iter().map(|&i| i as i128)).collect()
    }

    proptest! {
        #[test]
        fn order_matches_flattened_tuples(
            t1 in 0u64..3, i1 in proptest::collection::vec(-3i64..3, 0..4),
            t2 in 0u64..3, i2 in proptest::collection::vec(-3i64..3, 0..4),
        ) {
            let (a, b) = (Address::new(t1, i1), Address::new(t2, i2));
            prop_assert_eq!(a.cmp(&b), flat(&a).cmp(&flat(&b)));
        }

        #[test]
        fn display_round_trips(t in any::<u64>(), idx in proptest::collection::vec(any::<i64>(), 0..5)) {
            let a = Address::new(t, idx);
            prop_assert_eq!(a.to_string().parse::<Address>().unwrap(), a);
        }
    }
}
