//! Order types built from finite orders, `ω^p` and `ω*^p`.
//!
//! An [`OrderType`] is a left-to-right concatenation of atoms, optionally
//! followed by a block that repeats ω-many times. Atoms store
//! `coeff` copies of `ω^power`, rendered `w^power*coeff` (the `ω^p·a`
//! convention of right-hand coefficients).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Orientation of an infinite index domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn factor(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Plus => "+",
            Orientation::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderTypeAtom {
    /// A finite order with `size >= 1` points.
    Fin(u64),
    /// `coeff` concatenated copies of `ω^power`.
    Omega { coeff: u64, power: u32 },
    /// `coeff` concatenated copies of `ω*^power`.
    OmegaStar { coeff: u64, power: u32 },
}

impl OrderTypeAtom {
    pub fn omega(power: u32) -> Self {
        OrderTypeAtom::Omega { coeff: 1, power }
    }

    pub fn omega_star(power: u32) -> Self {
        OrderTypeAtom::OmegaStar { coeff: 1, power }
    }

    fn validate(&self) -> Result<(), OrdinalError> {
        match *self {
            OrderTypeAtom::Fin(0) => Err(OrdinalError::InvalidAtom(*self)),
            OrderTypeAtom::Omega { coeff, power } | OrderTypeAtom::OmegaStar { coeff, power }
                if coeff == 0 || power == 0 =>
            {
                Err(OrdinalError::InvalidAtom(*self))
            }
            _ => Ok(()),
        }
    }

    fn power(&self) -> u32 {
        match *self {
            OrderTypeAtom::Fin(_) => 0,
            OrderTypeAtom::Omega { power, .. } | OrderTypeAtom::OmegaStar { power, .. } => power,
        }
    }
}

impl fmt::Display for OrderTypeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, coeff, power) = match *self {
            OrderTypeAtom::Fin(n) => return write!(f, "{n}"),
            OrderTypeAtom::Omega { coeff, power } => ("w", coeff, power),
            OrderTypeAtom::OmegaStar { coeff, power } => ("w*", coeff, power),
        };
        f.write_str(head)?;
        if power != 1 {
            write!(f, "^{power}")?;
        }
        if coeff != 1 {
            write!(f, "*{coeff}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("invalid order-type atom {0:?}")]
    InvalidAtom(OrderTypeAtom),
    #[error("multiplier must be positive")]
    ZeroMultiplier,
    #[error("cannot repeat an order type mixing w and w* along one orientation")]
    MixedOrientation,
    #[error("cannot repeat the empty order type")]
    EmptyBase,
    #[error("an w-repeated block must be the last summand")]
    TailNotLast,
    #[error("coefficient overflow")]
    Overflow,
    #[error("cannot parse order type `{0}`")]
    Parse(String),
}

/// A normal-form order type: `atoms` followed, when `repeating` is set, by
/// that block repeated ω-many times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrderType {
    atoms: Vec<OrderTypeAtom>,
    repeating: Option<Vec<OrderTypeAtom>>,
}

fn combine(left: OrderTypeAtom, right: OrderTypeAtom) -> Result<Option<OrderTypeAtom>, OrdinalError> {
    use OrderTypeAtom::*;
    let add = |a: u64, b: u64| a.checked_add(b).ok_or(OrdinalError::Overflow);
    Ok(match (left, right) {
        (Fin(n), Fin(m)) => Some(Fin(add(n, m)?)),
        (Fin(_), Omega { .. }) => Some(right),
        (OmegaStar { .. }, Fin(_)) => Some(left),
        (Omega { coeff: c, power: p }, Omega { coeff: d, power: q }) => {
            if p == q {
                Some(Omega { coeff: add(c, d)?, power: p })
            } else if p < q {
                Some(right)
            } else {
                None
            }
        }
        (OmegaStar { coeff: c, power: p }, OmegaStar { coeff: d, power: q }) => {
            if p == q {
                Some(OmegaStar { coeff: add(c, d)?, power: p })
            } else if p > q {
                Some(left)
            } else {
                None
            }
        }
        _ => None,
    })
}

fn reduce(raw: impl IntoIterator<Item = OrderTypeAtom>) -> Result<Vec<OrderTypeAtom>, OrdinalError> {
    let mut stack: Vec<OrderTypeAtom> = Vec::new();
    for atom in raw {
        atom.validate()?;
        let mut cur = atom;
        while let Some(&top) = stack.last() {
            match combine(top, cur)? {
                Some(merged) => {
                    stack.pop();
                    cur = merged;
                }
                None => break,
            }
        }
        stack.push(cur);
    }
    Ok(stack)
}

/// Rewrites `raw` to normal form: finite parts merge, `n + ω^p = ω^p`,
/// `ω*^p + n = ω*^p`, equal powers add their coefficients and a lower
/// power is absorbed by a following higher one (mirrored for `ω*`).
pub fn normalize(raw: &[OrderTypeAtom]) -> Result<OrderType, OrdinalError> {
    Ok(OrderType { atoms: reduce(raw.iter().copied())?, repeating: None })
}

pub fn sum(parts: &[OrderType]) -> Result<OrderType, OrdinalError> {
    let mut atoms = Vec::new();
    let mut repeating = None;
    for part in parts {
        if part.is_empty() {
            continue;
        }
        if repeating.is_some() {
            return Err(OrdinalError::TailNotLast);
        }
        atoms.extend_from_slice(&part.atoms);
        repeating.clone_from(&part.repeating);
    }
    Ok(OrderType { atoms: reduce(atoms)?, repeating })
}

pub fn mul_finite(tau: &OrderType, m: u64) -> Result<OrderType, OrdinalError> {
    if m == 0 {
        return Err(OrdinalError::ZeroMultiplier);
    }
    if m == 1 || tau.is_empty() {
        return Ok(tau.clone());
    }
    if tau.repeating.is_some() {
        return Err(OrdinalError::TailNotLast);
    }
    // binary doubling; sum is associative on normal forms
    let mut result = OrderType::empty();
    let mut base = tau.clone();
    let mut k = m;
    while k > 0 {
        if k & 1 == 1 {
            result = sum(&[result, base.clone()])?;
        }
        k >>= 1;
        if k > 0 {
            base = sum(&[base.clone(), base])?;
        }
    }
    Ok(result)
}

/// ω-many (`Plus`) or ω*-many (`Minus`) copies of `tau`.
pub fn mul_omega(tau: &OrderType, orientation: Orientation) -> Result<OrderType, OrdinalError> {
    if tau.repeating.is_some() {
        return Err(OrdinalError::TailNotLast);
    }
    if tau.is_empty() {
        return Err(OrdinalError::EmptyBase);
    }
    let mut top = 0;
    for atom in &tau.atoms {
        match (atom, orientation) {
            (OrderTypeAtom::Fin(_), _) => {}
            (OrderTypeAtom::Omega { power, .. }, Orientation::Plus)
            | (OrderTypeAtom::OmegaStar { power, .. }, Orientation::Minus) => top = top.max(*power),
            _ => return Err(OrdinalError::MixedOrientation),
        }
    }
    let power = top.checked_add(1).ok_or(OrdinalError::Overflow)?;
    let atom = match orientation {
        Orientation::Plus => OrderTypeAtom::omega(power),
        Orientation::Minus => OrderTypeAtom::omega_star(power),
    };
    Ok(OrderType { atoms: vec![atom], repeating: None })
}

impl OrderType {
    pub fn empty() -> Self {
        OrderType::default()
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            OrderType::empty()
        } else {
            OrderType { atoms: vec![OrderTypeAtom::Fin(n)], repeating: None }
        }
    }

    pub fn omega() -> Self {
        OrderType { atoms: vec![OrderTypeAtom::omega(1)], repeating: None }
    }

    pub fn omega_star() -> Self {
        OrderType { atoms: vec![OrderTypeAtom::omega_star(1)], repeating: None }
    }

    pub fn from_atoms(raw: &[OrderTypeAtom]) -> Result<Self, OrdinalError> {
        normalize(raw)
    }

    /// `self` repeated ω-many times. Single-signed blocks collapse to one
    /// atom; anything else is kept as a repeating tail.
    pub fn repeat_omega(&self) -> Result<Self, OrdinalError> {
        if self.is_empty() {
            return Ok(OrderType::empty());
        }
        match mul_omega(self, Orientation::Plus) {
            Ok(t) => Ok(t),
            Err(OrdinalError::MixedOrientation) => {
                Ok(OrderType { atoms: Vec::new(), repeating: Some(self.atoms.clone()) })
            }
            Err(e) => Err(e),
        }
    }

    pub fn atoms(&self) -> &[OrderTypeAtom] {
        &self.atoms
    }

    pub fn repeating(&self) -> Option<&[OrderTypeAtom]> {
        self.repeating.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.repeating.is_none()
    }

    /// Largest exponent among infinite atoms (0 for finite order types).
    pub fn highest_power(&self) -> u32 {
        self.atoms
            .iter()
            .chain(self.repeating.iter().flatten())
            .map(OrderTypeAtom::power)
            .max()
            .unwrap_or(0)
    }

    /// The size when the order type is finite.
    pub fn finite_size(&self) -> Option<u64> {
        match (self.atoms.as_slice(), &self.repeating) {
            ([], None) => Some(0),
            ([OrderTypeAtom::Fin(n)], None) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for atom in &self.atoms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{atom}")?;
        }
        if let Some(block) = &self.repeating {
            if !first {
                f.write_str(" + ")?;
            }
            f.write_str("(")?;
            for (k, atom) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "{atom}")?;
            }
            f.write_str(")·w")?;
        }
        Ok(())
    }
}

fn parse_atom(text: &str) -> Option<OrderTypeAtom> {
    let num = |s: &str| -> Option<u64> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    let Some(rest) = text.strip_prefix('w') else {
        return num(text).filter(|&n| n > 0).map(OrderTypeAtom::Fin);
    };
    // "w*" is the star marker unless a digit follows (then it is "w*coeff")
    let (star, rest) = match rest.strip_prefix('*') {
        Some(after) if !after.starts_with(|c: char| c.is_ascii_digit()) => (true, after),
        _ => (false, rest),
    };
    let (power, rest) = match rest.strip_prefix('^') {
        Some(after) => {
            let end = after.find('*').unwrap_or(after.len());
            (u32::try_from(num(&after[..end])?).ok()?, &after[end..])
        }
        None => (1, rest),
    };
    let coeff = match rest {
        "" => 1,
        _ => num(rest.strip_prefix('*')?)?,
    };
    let atom = if star {
        OrderTypeAtom::OmegaStar { coeff, power }
    } else {
        OrderTypeAtom::Omega { coeff, power }
    };
    atom.validate().ok().map(|_| atom)
}

fn parse_atom_list(text: &str) -> Option<Vec<OrderTypeAtom>> {
    text.split(" + ").map(|t| parse_atom(t.trim())).collect()
}

impl FromStr for OrderType {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrdinalError::Parse(s.to_string());
        let s_trim = s.trim();
        match s_trim {
            "0" => return Ok(OrderType::empty()),
            "" => return Err(bad()),
            _ => {}
        }
        let (head, block) = match s_trim.find('(') {
            Some(open) => {
                let inner = s_trim[open + 1..].strip_suffix(")·w").ok_or_else(bad)?;
                let head = s_trim[..open].trim_end();
                let head = if head.is_empty() {
                    ""
                } else {
                    head.strip_suffix('+').ok_or_else(bad)?.trim_end()
                };
                (head, Some(parse_atom_list(inner).ok_or_else(bad)?))
            }
            None => (s_trim, None),
        };
        let atoms = if head.is_empty() { Vec::new() } else { parse_atom_list(head).ok_or_else(bad)? };
        let mut ot = normalize(&atoms)?;
        if let Some(block) = block {
            ot.repeating = Some(reduce(block)?);
        }
        Ok(ot)
    }
}
