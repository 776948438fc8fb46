//! Fair enumeration of index tuples and bounded verification of
//! injectivity and coverage.
//!
//! Round `r` visits the tuples `(t, I)` with `max(t, |I|∞) = r`, ordered by
//! `t` and then lexicographically by `I`. Every tuple is visited exactly once.

use crate::address::Address;
use crate::expr::EvalError;
use crate::shuffle::{IndexDomain, Shuffle};

#[derive(Debug, Clone)]
pub struct Dovetail {
    components: Vec<Vec<IndexDomain>>,
    family: Option<Vec<IndexDomain>>,
    last_round: Option<i64>,
    round: i64,
    t: u64,
    ranges: Vec<(i64, i64)>,
    shell_suffix: Vec<bool>,
    full: bool,
    cur: Option<Vec<i64>>,
    steps: u64,
    exhausted: bool,
}

impl Dovetail {
    pub fn new(s: &Shuffle) -> Self {
        let components: Vec<Vec<IndexDomain>> = s.components().iter().map(|c| c.domains().to_vec()).collect();
        let family = s.family().map(|f| f.domains().to_vec());
        let last_round = if s.is_finite() {
            let radius = components
                .iter()
                .flatten()
                .map(|d| {
                    let (lo, hi) = d.bounds();
                    lo.unwrap_or(0).abs().max(hi.unwrap_or(0).abs())
                })
                .max()
                .unwrap_or(0);
            Some(radius.max(components.len() as i64 - 1))
        } else {
            None
        };
        Dovetail {
            components,
            family,
            last_round,
            round: 0,
            t: 0,
            ranges: Vec::new(),
            shell_suffix: Vec::new(),
            full: false,
            cur: None,
            steps: 0,
            exhausted: false,
        }
    }

    /// Tuples yielded so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Set once a finite shuffle has no tuples left.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn round(&self) -> i64 {
        self.round
    }

    fn domains(&self, t: u64) -> Option<&[IndexDomain]> {
        match self.components.get(t as usize) {
            Some(d) => Some(d),
            None => self.family.as_deref(),
        }
    }

    fn on_shell(&self, i: i64) -> bool {
        i.abs() == self.round
    }

    /// Whether some position `>= pos` can still take a shell value.
    fn shell_reachable(&self, pos: usize) -> bool {
        self.shell_suffix.get(pos).copied().unwrap_or(false)
    }

    fn prefix_on_shell(&self, cur: &[i64], pos: usize) -> bool {
        self.full || cur[..pos].iter().any(|&i| self.on_shell(i))
    }

    /// Smallest allowed value at `pos` that is greater than `after`.
    fn next_allowed(&self, pos: usize, free: bool, after: Option<i64>) -> Option<i64> {
        let (lo, hi) = self.ranges[pos];
        if free || self.shell_reachable(pos + 1) {
            let v = after.map_or(lo, |a| a + 1);
            return (v <= hi).then_some(v);
        }
        let r = self.round;
        [-r, r].into_iter().find(|&v| v >= lo && v <= hi && after.is_none_or(|a| v > a))
    }

    fn fill(&self, cur: &mut [i64], from: usize) -> bool {
        for pos in from..cur.len() {
            let free = self.prefix_on_shell(cur, pos);
            match self.next_allowed(pos, free, None) {
                Some(v) => cur[pos] = v,
                None => return false,
            }
        }
        true
    }

    fn advance(&self, cur: &mut [i64]) -> bool {
        for pos in (0..cur.len()).rev() {
            let free = self.prefix_on_shell(cur, pos);
            if let Some(v) = self.next_allowed(pos, free, Some(cur[pos])) {
                cur[pos] = v;
                if self.fill(cur, pos + 1) {
                    return true;
                }
            }
        }
        false
    }

    /// Prepares component `t` of the current round; returns its first tuple.
    fn start(&mut self) -> Option<Vec<i64>> {
        let r = self.round;
        let domains = self.domains(self.t)?.to_vec();
        self.ranges = domains.iter().map(|d| d.ball(r)).collect();
        if self.ranges.iter().any(|&(lo, hi)| lo > hi) {
            return None;
        }
        self.full = self.t as i64 == r;
        let mut suffix = vec![false; domains.len() + 1];
        for pos in (0..domains.len()).rev() {
            let (lo, hi) = self.ranges[pos];
            suffix[pos] = suffix[pos + 1] || (lo <= -r && -r <= hi) || (lo <= r && r <= hi);
        }
        self.shell_suffix = suffix;
        if !self.full && !self.shell_reachable(0) {
            return None;
        }
        let mut cur = vec![0; domains.len()];
        self.fill(&mut cur, 0).then_some(cur)
    }
}

impl Iterator for Dovetail {
    type Item = (u64, Vec<i64>);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.exhausted {
                return None;
            }
            if let Some(mut cur) = self.cur.take() {
                if self.advance(&mut cur) {
                    self.cur = Some(cur.clone());
                    self.steps += 1;
                    return Some((self.t, cur));
                }
                self.t += 1;
                continue;
            }
            if self.t as i64 > self.round || self.domains(self.t).is_none() {
                self.round += 1;
                self.t = 0;
                if self.last_round.is_some_and(|last| self.round > last) {
                    self.exhausted = true;
                }
                continue;
            }
            match self.start() {
                Some(cur) => {
                    self.cur = Some(cur.clone());
                    self.steps += 1;
                    return Some((self.t, cur));
                }
                None => self.t += 1,
            }
        }
    }
}

/// A natural value, or why the tuple does not yield one.
pub(crate) fn natural(s: &Shuffle, t: u64, indices: &[i64]) -> Result<u64, EvalError> {
    let v = s.eval(t, indices)?;
    u64::try_from(v).map_err(|_| EvalError::OutsideDomain(v))
}

/// Yields `(value, address)` pairs for the first `budget` tuples, skipping
/// tuples whose value is undefined or negative.
pub fn enumerate_support(s: &Shuffle, budget: u64) -> Vec<(u64, Address)> {
    Dovetail::new(s)
        .take(budget as usize)
        .filter_map(|(t, indices)| natural(s, t, &indices).ok().map(|v| (v, Address::new(t, indices))))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checked_up_to: u64,
    pub covered: Vec<bool>,
    pub duplicates: Vec<(u64, Address, Address)>,
    pub missing: Vec<u64>,
    pub budget_used: u64,
    /// The enumeration ran out of tuples, so `missing` is definitive.
    pub exhausted: bool,
    /// Tuples whose value was undefined or negative.
    pub invalid: u64,
    pub first_invalid: Option<(Address, EvalError)>,
}

impl VerificationReport {
    /// "Member of 𝒮∞ up to N": no duplicates and nothing missing.
    pub fn is_member(&self) -> bool {
        self.duplicates.is_empty() && self.missing.is_empty()
    }
}

pub fn verify(s: &Shuffle, n: u64, budget: u64) -> VerificationReport {
    let mut first: Vec<Option<Address>> = vec![None; n as usize + 1];
    let mut duplicates = Vec::new();
    let mut invalid = 0;
    let mut first_invalid = None;
    let mut walk = Dovetail::new(s);
    for (t, indices) in walk.by_ref().take(budget as usize) {
        match natural(s, t, &indices) {
            Ok(v) if v <= n => {
                let addr = Address::new(t, indices);
                match &first[v as usize] {
                    Some(prev) => duplicates.push((v, prev.clone(), addr)),
                    None => first[v as usize] = Some(addr),
                }
            }
            Ok(_) => {}
            Err(e) => {
                invalid += 1;
                if first_invalid.is_none() {
                    first_invalid = Some((Address::new(t, indices), e));
                }
            }
        }
    }
    // `take` stops before asking for one more tuple, so probe explicitly
    let exhausted = walk.is_exhausted() || (walk.steps() < budget && walk.next().is_none());
    let covered: Vec<bool> = first.iter().map(Option::is_some).collect();
    let missing = (0..=n).filter(|&v| !covered[v as usize]).collect();
    VerificationReport {
        checked_up_to: n,
        covered,
        duplicates,
        missing,
        budget_used: walk.steps().min(budget),
        exhausted,
        invalid,
        first_invalid,
    }
}
