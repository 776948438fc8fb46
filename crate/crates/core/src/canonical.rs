//! Part-type sequences, canonical partitions, transfers and diagrams.

use std::fmt;

use thiserror::Error;

use crate::address::{address_of, AddressError};
use crate::expr::EvalError;
use crate::ordinal::{self, OrderType, OrdinalError, Orientation};
use crate::shuffle::{Component, Shuffle, ShuffleError, Table, TableTail};

/// Repeats with at most this many expanded parts are written out.
const EXPAND_LIMIT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartType {
    Ladder,
    Snake,
    /// A finite part; `None` when the length is unknown.
    Bench(Option<u64>),
}

impl PartType {
    fn glyph(&self) -> &'static str {
        match self {
            PartType::Ladder => "•-o",
            PartType::Snake => "o-•",
            PartType::Bench(_) => "•-•",
        }
    }
}

impl fmt::Display for PartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartType::Ladder => f.write_str("ladder"),
            PartType::Snake => f.write_str("snake"),
            PartType::Bench(Some(n)) => write!(f, "bench({n})"),
            PartType::Bench(None) => f.write_str("bench(?)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepeatCount {
    Finite(u64),
    Omega,
    OmegaStar,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PartItem {
    Part(PartType),
    Repeat { body: Vec<PartItem>, count: RepeatCount },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartSequence {
    pub items: Vec<PartItem>,
}

impl PartSequence {
    pub fn parts(parts: &[PartType]) -> Self {
        PartSequence { items: parts.iter().copied().map(PartItem::Part).collect() }
    }

    /// The order type of the sequence, when it is expressible.
    pub fn order_type(&self) -> Result<OrderType, OrdinalError> {
        items_order_type(&self.items)
    }
}

fn items_order_type(items: &[PartItem]) -> Result<OrderType, OrdinalError> {
    let parts = items
        .iter()
        .map(|item| match item {
            PartItem::Part(PartType::Ladder) => Ok(OrderType::omega()),
            PartItem::Part(PartType::Snake) => Ok(OrderType::omega_star()),
            PartItem::Part(PartType::Bench(n)) => Ok(OrderType::finite(n.unwrap_or(1))),
            PartItem::Repeat { body, count } => {
                let tau = items_order_type(body)?;
                match count {
                    RepeatCount::Finite(m) => ordinal::mul_finite(&tau, *m),
                    RepeatCount::Omega => ordinal::mul_omega(&tau, Orientation::Plus),
                    RepeatCount::OmegaStar => ordinal::mul_omega(&tau, Orientation::Minus),
                }
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    ordinal::sum(&parts)
}

impl fmt::Display for PartSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_items(f: &mut fmt::Formatter<'_>, items: &[PartItem]) -> fmt::Result {
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                match item {
                    PartItem::Part(p) => write!(f, "{p}")?,
                    PartItem::Repeat { body, count } => {
                        f.write_str("(")?;
                        write_items(f, body)?;
                        match count {
                            RepeatCount::Finite(m) => write!(f, ")x{m}")?,
                            RepeatCount::Omega => f.write_str(")xw")?,
                            RepeatCount::OmegaStar => f.write_str(")xw*")?,
                        }
                    }
                }
            }
            Ok(())
        }
        f.write_str("[")?;
        write_items(f, &self.items)?;
        f.write_str("]")
    }
}

fn repeat(body: Vec<PartItem>, count: RepeatCount) -> Vec<PartItem> {
    match count {
        RepeatCount::Finite(m) if m.saturating_mul(body.len() as u64) <= EXPAND_LIMIT => {
            let mut out = Vec::with_capacity(body.len() * m as usize);
            for _ in 0..m {
                out.extend(body.iter().cloned());
            }
            out
        }
        _ => vec![PartItem::Repeat { body, count }],
    }
}

fn component_parts(c: &Component) -> Vec<PartItem> {
    let (inner, outer) = c.domains().split_last().expect("components have domains");
    let part = match (inner.size(), inner.orientation()) {
        (Some(n), _) => PartType::Bench(Some(n)),
        (None, Some(Orientation::Plus)) => PartType::Ladder,
        (None, _) => PartType::Snake,
    };
    let mut items = vec![PartItem::Part(part)];
    for d in outer.iter().rev() {
        let count = match (d.size(), d.orientation()) {
            (Some(m), _) => RepeatCount::Finite(m),
            (None, Some(Orientation::Plus)) => RepeatCount::Omega,
            (None, _) => RepeatCount::OmegaStar,
        };
        items = repeat(items, count);
    }
    items
}

/// One part per innermost segment, in component order.
pub fn part_type_sequence(s: &Shuffle) -> PartSequence {
    let mut items: Vec<PartItem> = s.components().iter().flat_map(component_parts).collect();
    if let Some(f) = s.family() {
        items.push(PartItem::Repeat { body: component_parts(f), count: RepeatCount::Omega });
    }
    PartSequence { items }
}

/// The leftmost part, if the item has a first element.
fn leftmost(item: &PartItem) -> Option<PartType> {
    match item {
        PartItem::Part(p) => Some(*p),
        PartItem::Repeat { count: RepeatCount::OmegaStar, .. } => None,
        PartItem::Repeat { body, .. } => body.first().and_then(leftmost),
    }
}

/// The rightmost part, if the item has a last element.
fn rightmost(item: &PartItem) -> Option<PartType> {
    match item {
        PartItem::Part(p) => Some(*p),
        PartItem::Repeat { count: RepeatCount::Omega, .. } => None,
        PartItem::Repeat { body, .. } => body.last().and_then(rightmost),
    }
}

fn bench_sum(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    a.zip(b).and_then(|(a, b)| a.checked_add(b))
}

/// Bench absorption on an adjacent pair, extended across repeat boundaries.
fn merge(left: &PartItem, right: &PartItem) -> Option<PartItem> {
    use PartItem::Part;
    use PartType::*;
    match (left, right) {
        (Part(Bench(a)), Part(Bench(b))) => Some(Part(Bench(bench_sum(*a, *b)))),
        (Part(Snake), Part(Bench(_))) => Some(Part(Snake)),
        (Part(Bench(_)), Part(Ladder)) => Some(Part(Ladder)),
        (Part(Bench(_)), r @ PartItem::Repeat { .. }) if leftmost(r) == Some(Ladder) => Some(r.clone()),
        (l @ PartItem::Repeat { .. }, Part(Bench(_))) if rightmost(l) == Some(Snake) => Some(l.clone()),
        _ => None,
    }
}

/// Simplifies a repeat whose body is already reduced.
fn reduce_repeat(mut body: Vec<PartItem>, count: RepeatCount) -> Vec<PartItem> {
    loop {
        let all_bench = body.iter().all(|i| matches!(i, PartItem::Part(PartType::Bench(_))));
        match count {
            RepeatCount::Finite(_) => return repeat(body, count),
            _ if body.is_empty() => return Vec::new(),
            RepeatCount::Omega if all_bench => return vec![PartItem::Part(PartType::Ladder)],
            RepeatCount::OmegaStar if all_bench => return vec![PartItem::Part(PartType::Snake)],
            _ => {}
        }
        let first_bench = matches!(body.first(), Some(PartItem::Part(PartType::Bench(_))));
        let last_bench = matches!(body.last(), Some(PartItem::Part(PartType::Bench(_))));
        let first = body.first().and_then(leftmost);
        let last = body.last().and_then(rightmost);
        match count {
            // each copy's trailing bench joins the next copy's leading ladder
            RepeatCount::Omega if last_bench && first == Some(PartType::Ladder) => {
                body.pop();
            }
            // every leading bench but the first joins the previous trailing snake
            RepeatCount::Omega if first_bench && last == Some(PartType::Snake) => {
                let b = body.remove(0);
                let mut out = vec![b];
                out.extend(reduce_repeat(body, count));
                return out;
            }
            RepeatCount::OmegaStar if first_bench && last == Some(PartType::Snake) => {
                body.remove(0);
            }
            RepeatCount::OmegaStar if last_bench && first == Some(PartType::Ladder) => {
                let b = body.pop().expect("nonempty");
                let mut out = reduce_repeat(body, count);
                out.push(b);
                return out;
            }
            _ => return vec![PartItem::Repeat { body, count }],
        }
    }
}

fn reduce(items: &[PartItem]) -> Vec<PartItem> {
    let mut stack: Vec<PartItem> = Vec::new();
    let mut pending: Vec<PartItem> = items.iter().rev().cloned().collect();
    while let Some(item) = pending.pop() {
        let expanded = match item {
            PartItem::Repeat { body, count } => reduce_repeat(reduce(&body), count),
            part => vec![part],
        };
        for mut cur in expanded {
            while let Some(top) = stack.last() {
                match merge(top, &cur) {
                    Some(m) => {
                        stack.pop();
                        cur = m;
                    }
                    None => break,
                }
            }
            stack.push(cur);
        }
    }
    stack
}

fn has_snake_ladder(items: &[PartItem]) -> bool {
    let boundary = items
        .windows(2)
        .any(|w| rightmost(&w[0]) == Some(PartType::Snake) && leftmost(&w[1]) == Some(PartType::Ladder));
    boundary
        || items.iter().any(|item| match item {
            PartItem::Part(_) => false,
            PartItem::Repeat { body, count } => {
                let copies_touch = !matches!(count, RepeatCount::Finite(0 | 1))
                    && body.last().and_then(rightmost) == Some(PartType::Snake)
                    && body.first().and_then(leftmost) == Some(PartType::Ladder);
                copies_touch || has_snake_ladder(body)
            }
        })
}

/// Merges adjacent benches and absorbs benches into a preceding snake or a
/// following ladder, to a fixpoint. The flag is `true` when no
/// snake is immediately followed by a ladder, i.e. the canonical
/// partition is unique.
pub fn canonicalize(ps: &PartSequence) -> (PartSequence, bool) {
    let mut items = reduce(&ps.items);
    loop {
        let again = reduce(&items);
        if again == items {
            break;
        }
        items = again;
    }
    let unique = !has_snake_ladder(&items);
    (PartSequence { items }, unique)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransferDirection {
    /// The ladder's smallest elements become the top of the snake.
    LadderToSnake,
    /// The snake's top elements become the start of the ladder.
    SnakeToLadder,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("components {0} and {next} are not a single-segment snake followed by a ladder", next = .0 + 1)]
    NoSuchPair(usize),
    #[error("the number of transferred elements must be positive")]
    ZeroTransfer,
    #[error(transparent)]
    Address(#[from] AddressError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

/// Reads the first `len` values of a single-domain segment, in ≺ order
/// away from its anchor: the segment's start for a ladder and its top for
/// a snake.
fn segment_values(s: &Shuffle, t: u64, len: usize) -> Result<Vec<u64>, CanonicalError> {
    let c = &s.components()[t as usize];
    let d = c.domains()[0];
    let step = -d.orientation().expect("segments are oriented").factor();
    (0..len as i64)
        .map(|k| {
            let index = d.anchor() - step * k;
            let v = c.eval(t, &[index])?;
            u64::try_from(v).map_err(|_| CanonicalError::Address(AddressError::NotNatural(v)))
        })
        .collect()
}

/// Moves `n` elements across the boundary between the snake at component
/// `pair_index` and the ladder after it. The two parts become tables
/// covering every value `<= upto`.
pub fn transfer(
    s: &Shuffle,
    pair_index: usize,
    n: u64,
    direction: TransferDirection,
    upto: u64,
    budget: u64,
) -> Result<Shuffle, CanonicalError> {
    if n == 0 {
        return Err(CanonicalError::ZeroTransfer);
    }
    let segment = |t: usize, o: Orientation| {
        s.components().get(t).is_some_and(|c| c.domains().len() == 1 && c.orientation() == Some(o))
    };
    if s.family().is_some() || !segment(pair_index, Orientation::Minus) || !segment(pair_index + 1, Orientation::Plus) {
        return Err(CanonicalError::NoSuchPair(pair_index));
    }
    let (ts, tl) = (pair_index as u64, pair_index as u64 + 1);
    // lengths needed so that every value <= upto stays covered
    let (mut snake_len, mut ladder_len) = (0usize, 0usize);
    for x in 0..=upto {
        let a = address_of(s, x, budget)?;
        let d = s.components()[a.component as usize].domains()[0];
        let k = (a.indices[0] - d.anchor()).unsigned_abs() as usize + 1;
        if a.component == ts {
            snake_len = snake_len.max(k);
        } else if a.component == tl {
            ladder_len = ladder_len.max(k);
        }
    }
    let n = n as usize;
    let (snake, ladder) = match direction {
        TransferDirection::LadderToSnake => {
            let lad = segment_values(s, tl, ladder_len.max(n + 1))?;
            let mut snake: Vec<u64> = lad[..n].iter().rev().copied().collect();
            snake.extend(segment_values(s, ts, snake_len)?);
            (snake, lad[n..].to_vec())
        }
        TransferDirection::SnakeToLadder => {
            let sn = segment_values(s, ts, snake_len.max(n + 1))?;
            let mut ladder: Vec<u64> = sn[..n].iter().rev().copied().collect();
            ladder.extend(segment_values(s, tl, ladder_len)?);
            (sn[n..].to_vec(), ladder)
        }
    };
    let table = |values, sign| Component::table(Table { values, tail: TableTail::None, sign });
    let mut components = s.components().to_vec();
    components[pair_index] = table(snake, Orientation::Minus)?;
    components[pair_index + 1] = table(ladder, Orientation::Plus)?;
    Ok(Shuffle::new(format!("{}'", s.label()), components, None)?)
}

fn render_items(items: &[PartItem]) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < items.len() {
        match (&items[k], items.get(k + 1)) {
            (PartItem::Part(PartType::Ladder), Some(PartItem::Part(PartType::Snake))) => {
                out.push("•-o-•".to_string());
                k += 2;
            }
            (PartItem::Part(PartType::Snake), Some(PartItem::Part(PartType::Ladder))) => {
                out.push("o-o".to_string());
                k += 2;
            }
            (PartItem::Part(p), _) => {
                out.push(p.glyph().to_string());
                k += 1;
            }
            (PartItem::Repeat { body, count }, _) => {
                let block = render_items(body).join(" ");
                match count {
                    RepeatCount::Omega => out.extend([block.clone(), block.clone(), "...".into(), block, "...".into()]),
                    RepeatCount::OmegaStar => out.extend(["...".into(), block.clone(), "...".into(), block.clone(), block]),
                    RepeatCount::Finite(m) => out.push(format!("({block})^{m}")),
                }
                k += 1;
            }
        }
    }
    out
}

fn diagram_tokens(s: &Shuffle) -> Vec<String> {
    let (ps, _) = canonicalize(&part_type_sequence(s));
    render_items(&ps.items)
}

/// Blocks of the canonical partition, joined by single spaces.
pub fn diagram(s: &Shuffle) -> String {
    diagram_tokens(s).join(" ")
}

pub fn diagram_dot(s: &Shuffle) -> String {
    let tokens = diagram_tokens(s);
    let mut out = String::from("digraph shuffle {\n");
    for (k, tok) in tokens.iter().enumerate() {
        out.push_str(&format!("  n{k} [label=\"{tok}\"];\n"));
    }
    for k in 1..tokens.len() {
        out.push_str(&format!("  n{} -> n{k};\n", k - 1));
    }
    out.push_str("}\n");
    out
}
