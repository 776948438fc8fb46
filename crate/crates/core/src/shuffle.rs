//! Uniform components, mixed shuffles and their presentation-level
//! invariants (degree, sign, order type).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::address::AddressMemo;
use crate::expr::{self, Env, EvalError, ExprError, SegmentExpr, Var};
use crate::ordinal::{self, OrderType, OrdinalError, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexDomain {
    /// `{0, ..., m-1}`
    FinitePrefix(u64),
    /// `{n, ..., m}`
    FiniteRange(i64, i64),
    /// `{start, start+1, ...}`
    PlusInf { start: i64 },
    /// `{..., end-1, end}`
    MinusInf { end: i64 },
}

impl IndexDomain {
    pub const PLUS: IndexDomain = IndexDomain::PlusInf { start: 0 };
    pub const MINUS: IndexDomain = IndexDomain::MinusInf { end: 0 };

    pub fn infinite(orientation: Orientation) -> Self {
        match orientation {
            Orientation::Plus => IndexDomain::PLUS,
            Orientation::Minus => IndexDomain::MINUS,
        }
    }

    pub fn validate(&self) -> Result<(), ShuffleError> {
        match *self {
            IndexDomain::FinitePrefix(0) => Err(ShuffleError::EmptyDomain),
            IndexDomain::FinitePrefix(m) if m > i64::MAX as u64 => Err(ShuffleError::InvalidDomain(format!("{self}"))),
            IndexDomain::FiniteRange(n, m) if n > m => Err(ShuffleError::EmptyDomain),
            IndexDomain::PlusInf { start } if start < 0 => Err(ShuffleError::InvalidDomain(format!("{self}"))),
            IndexDomain::MinusInf { end } if end > 0 => Err(ShuffleError::InvalidDomain(format!("{self}"))),
            _ => Ok(()),
        }
    }

    /// Inclusive bounds; `None` stands for an infinite end.
    pub fn bounds(&self) -> (Option<i64>, Option<i64>) {
        match *self {
            IndexDomain::FinitePrefix(m) => (Some(0), Some(m as i64 - 1)),
            IndexDomain::FiniteRange(n, m) => (Some(n), Some(m)),
            IndexDomain::PlusInf { start } => (Some(start), None),
            IndexDomain::MinusInf { end } => (None, Some(end)),
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        let (lo, hi) = self.bounds();
        lo.is_none_or(|lo| i >= lo) && hi.is_none_or(|hi| i <= hi)
    }

    pub fn orientation(&self) -> Option<Orientation> {
        match self {
            IndexDomain::PlusInf { .. } => Some(Orientation::Plus),
            IndexDomain::MinusInf { .. } => Some(Orientation::Minus),
            _ => None,
        }
    }

    pub fn size(&self) -> Option<u64> {
        match *self {
            IndexDomain::FinitePrefix(m) => Some(m),
            IndexDomain::FiniteRange(n, m) => Some((m as i128 - n as i128 + 1) as u64),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// The domain `{-i : i in self}`. `FinitePrefix(m)` and
    /// `FiniteRange(-m+1, 0)` are exchanged.
    pub fn negate(&self) -> Self {
        match *self {
            IndexDomain::FinitePrefix(m) => IndexDomain::FiniteRange(1 - m as i64, 0),
            IndexDomain::FiniteRange(n, 0) if n <= 0 => IndexDomain::FinitePrefix((1 - n) as u64),
            IndexDomain::FiniteRange(n, m) => IndexDomain::FiniteRange(-m, -n),
            IndexDomain::PlusInf { start } => IndexDomain::MinusInf { end: -start },
            IndexDomain::MinusInf { end } => IndexDomain::PlusInf { start: -end },
        }
    }

    /// The index closest to 0: where the segment starts (ladder) or ends (snake).
    pub fn anchor(&self) -> i64 {
        match *self {
            IndexDomain::FinitePrefix(_) => 0,
            IndexDomain::FiniteRange(n, _) => n,
            IndexDomain::PlusInf { start } => start,
            IndexDomain::MinusInf { end } => end,
        }
    }

    /// Indices with `|i| <= r`, as an inclusive range (empty when `lo > hi`).
    pub(crate) fn ball(&self, r: i64) -> (i64, i64) {
        let (lo, hi) = self.bounds();
        (lo.map_or(-r, |lo| lo.max(-r)), hi.map_or(r, |hi| hi.min(r)))
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IndexDomain::FinitePrefix(m) => write!(f, "[{m}]"),
            IndexDomain::FiniteRange(n, m) => write!(f, "[{n},{m}]"),
            IndexDomain::PlusInf { start: 0 } => f.write_str("[+inf]"),
            IndexDomain::PlusInf { start } => write!(f, "[{start},+inf]"),
            IndexDomain::MinusInf { end: 0 } => f.write_str("[-inf]"),
            IndexDomain::MinusInf { end } => write!(f, "[-inf,{end}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    StrictUniform,
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableTail {
    Identity,
    None,
}

/// A one-dimensional value map given by its first values. Index `±k`
/// holds `values[k]`; past the end the tail either continues with `k`
/// or is undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub values: Vec<u64>,
    pub tail: TableTail,
    pub sign: Orientation,
}

impl Table {
    pub fn get(&self, index: i64) -> Result<i128, EvalError> {
        if index * self.sign.factor() < 0 {
            return Err(EvalError::OutsideDomain(index as i128));
        }
        let k = index.unsigned_abs() as usize;
        match (self.values.get(k), self.tail) {
            (Some(&v), _) => Ok(v as i128),
            (None, TableTail::Identity) => Ok(k as i128),
            (None, TableTail::None) => Err(EvalError::OutsideTable { index, len: self.values.len() }),
        }
    }

    pub fn domain(&self) -> IndexDomain {
        IndexDomain::infinite(self.sign)
    }
}

/// `outer(prefix, anchor + ε·inner(rest))`, where `prefix` takes all but
/// the last of the outer indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Composed {
    pub outer: Component,
    pub inner: Component,
    pub anchor: i64,
    pub sign: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValueMap {
    Expr(SegmentExpr),
    Table(Table),
    Composed(Box<Composed>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    domains: Vec<IndexDomain>,
    value: ValueMap,
    shape: Shape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl From<Orientation> for Sign {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Plus => Sign::Plus,
            Orientation::Minus => Sign::Minus,
        }
    }
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Zero => "0",
            Sign::Plus => "+",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainSig {
    Finite(u64),
    Infinite,
}

impl fmt::Display for DomainSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSig::Finite(m) => write!(f, "{m}"),
            DomainSig::Infinite => f.write_str("inf"),
        }
    }
}

/// Degree of one component together with its domain signature. The
/// signature keeps finite domain sizes, which the bare degree forgets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentDegree {
    /// `None` for generalized shapes.
    pub degree: Option<u32>,
    pub signature: Vec<DomainSig>,
}

impl fmt::Display for ComponentDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.degree {
            return write!(f, "{d}");
        }
        f.write_str("[")?;
        for (k, s) in self.signature.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentCount {
    Finite(usize),
    Omega,
}

impl fmt::Display for ComponentCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentCount::Finite(n) => write!(f, "{n}"),
            ComponentCount::Omega => f.write_str("w"),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], repeating: bool) -> fmt::Result {
    f.write_str("[")?;
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    if repeating {
        f.write_str(", ...")?;
    }
    f.write_str("]")
}

/// `(m, per-component degrees)`. For an ω-family the last entry is the
/// template's degree, repeated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeDescriptor {
    pub count: ComponentCount,
    pub components: Vec<ComponentDegree>,
}

impl fmt::Display for DegreeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ", self.count)?;
        write_list(f, &self.components, self.count == ComponentCount::Omega)?;
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignDescriptor {
    pub count_sign: Sign,
    pub components: Vec<Sign>,
}

impl fmt::Display for SignDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ", self.count_sign)?;
        write_list(f, &self.components, self.count_sign == Sign::Plus)?;
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("infinite domains of one component must share an orientation")]
    MixedOrientation,
    #[error("an omega-family must be the last block")]
    OmegaFamilyNotLast,
    #[error("empty index domain")]
    EmptyDomain,
    #[error("invalid index domain {0}")]
    InvalidDomain(String),
    #[error("a shuffle needs at least one component")]
    NoComponents,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("expression uses index i{index} but the component has {arity} domains")]
    ArityMismatch { index: usize, arity: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("an omega-family template must be an expression")]
    FamilyNotExpression,
    #[error("composed value maps cannot be serialized")]
    Unserializable,
    #[error("component {index}: {source}")]
    AtComponent { index: usize, source: Box<ShuffleError> },
    #[error("invalid shuffle document: {0}")]
    Json(String),
}

impl ShuffleError {
    /// The error with component context stripped.
    pub fn root(&self) -> &ShuffleError {
        match self {
            ShuffleError::AtComponent { source, .. } => source.root(),
            e => e,
        }
    }
}

impl Component {
    pub fn new(domains: Vec<IndexDomain>, value: ValueMap) -> Result<Self, ShuffleError> {
        if domains.is_empty() {
            return Err(ShuffleError::EmptyDomain);
        }
        for d in &domains {
            d.validate()?;
        }
        let mut orientations = domains.iter().filter_map(IndexDomain::orientation);
        if let Some(first) = orientations.next() {
            if orientations.any(|o| o != first) {
                return Err(ShuffleError::MixedOrientation);
            }
        }
        match &value {
            ValueMap::Expr(e) => {
                for v in e.vars() {
                    if let Var::Index(index) = v {
                        if index >= domains.len() {
                            return Err(ShuffleError::ArityMismatch { index, arity: domains.len() });
                        }
                    }
                }
            }
            ValueMap::Table(t) => {
                if domains != [t.domain()] {
                    return Err(ShuffleError::InvalidTable("a table spans one infinite domain of its sign".into()));
                }
            }
            ValueMap::Composed(c) => {
                let split = c.outer.arity() - 1;
                if domains.len() != split + c.inner.arity() {
                    return Err(ShuffleError::InvalidTable("composed arity mismatch".into()));
                }
            }
        }
        let shape = shape_of(&domains);
        Ok(Component { domains, value, shape })
    }

    pub fn expr(domains: Vec<IndexDomain>, e: SegmentExpr) -> Result<Self, ShuffleError> {
        Component::new(domains, ValueMap::Expr(e))
    }

    /// Parses `text` with variables `i0 ..` (and `t` when `family` is set).
    pub fn parse(domains: Vec<IndexDomain>, text: &str, family: bool) -> Result<Self, ShuffleError> {
        let names = expr::index_var_names(domains.len(), family);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Component::expr(domains, expr::parse_expr(text, &refs)?)
    }

    pub fn table(table: Table) -> Result<Self, ShuffleError> {
        Component::new(vec![table.domain()], ValueMap::Table(table))
    }

    pub fn domains(&self) -> &[IndexDomain] {
        &self.domains
    }

    pub fn value(&self) -> &ValueMap {
        &self.value
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.domains.iter().find_map(IndexDomain::orientation)
    }

    pub fn sign(&self) -> Sign {
        self.orientation().map_or(Sign::Zero, Sign::from)
    }

    pub fn is_bench(&self) -> bool {
        self.orientation().is_none()
    }

    pub fn degree(&self) -> ComponentDegree {
        let n = self.domains.len() as u32;
        let degree = match self.shape {
            Shape::Generalized => None,
            Shape::StrictUniform if self.is_bench() => Some(0),
            Shape::StrictUniform if self.domains[0].is_finite() => Some(2 * (n - 1)),
            Shape::StrictUniform => Some(2 * n - 1),
        };
        let signature = self
            .domains
            .iter()
            .map(|d| d.size().map_or(DomainSig::Infinite, DomainSig::Finite))
            .collect();
        ComponentDegree { degree, signature }
    }

    /// Fold over the domains from innermost to outermost, starting at one point.
    pub fn order_type(&self) -> Result<OrderType, OrdinalError> {
        let mut tau = OrderType::finite(1);
        for d in self.domains.iter().rev() {
            tau = match (d.size(), d.orientation()) {
                (Some(m), _) => ordinal::mul_finite(&tau, m)?,
                (None, Some(o)) => ordinal::mul_omega(&tau, o)?,
                (None, None) => unreachable!("a domain is finite or oriented"),
            };
        }
        Ok(tau)
    }

    pub fn contains(&self, indices: &[i64]) -> bool {
        indices.len() == self.domains.len() && self.domains.iter().zip(indices).all(|(d, &i)| d.contains(i))
    }

    /// Raw evaluation at component index `t`; domain membership is not checked.
    pub fn eval(&self, t: u64, indices: &[i64]) -> Result<i128, EvalError> {
        match &self.value {
            ValueMap::Expr(e) => e.eval(Env { component: t as i64, indices }),
            ValueMap::Table(table) => table.get(indices[0]),
            ValueMap::Composed(c) => {
                let split = c.outer.arity() - 1;
                let u = c.inner.eval(0, &indices[split..])?;
                if u < 0 {
                    return Err(EvalError::OutsideDomain(u));
                }
                let idx = (c.anchor as i128)
                    .checked_add(c.sign.factor() as i128 * u)
                    .and_then(|v| i64::try_from(v).ok())
                    .ok_or(EvalError::OutsideDomain(u))?;
                if !c.outer.domains[split].contains(idx) {
                    return Err(EvalError::OutsideDomain(idx as i128));
                }
                let mut buf = Vec::with_capacity(split + 1);
                buf.extend_from_slice(&indices[..split]);
                buf.push(idx);
                c.outer.eval(t, &buf)
            }
        }
    }
}

fn shape_of(domains: &[IndexDomain]) -> Shape {
    // only the outermost domain may be finite
    if domains.iter().skip(1).all(|d| !d.is_finite()) {
        Shape::StrictUniform
    } else {
        Shape::Generalized
    }
}

/// A finite list of components, optionally followed by an ω-family whose
/// template sees its absolute component index as `t`.
#[derive(Debug, Clone)]
pub struct Shuffle {
    label: String,
    components: Vec<Component>,
    family: Option<Component>,
    pub(crate) memo: AddressMemo,
}

impl PartialEq for Shuffle {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.components == other.components && self.family == other.family
    }
}

impl Shuffle {
    pub fn new(label: impl Into<String>, components: Vec<Component>, family: Option<Component>) -> Result<Self, ShuffleError> {
        if components.is_empty() && family.is_none() {
            return Err(ShuffleError::NoComponents);
        }
        if let Some(f) = &family {
            if !matches!(f.value, ValueMap::Expr(_)) {
                return Err(ShuffleError::FamilyNotExpression);
            }
        }
        Ok(Shuffle { label: label.into(), components, family, memo: AddressMemo::default() })
    }

    pub fn single(label: impl Into<String>, component: Component) -> Self {
        Shuffle::new(label, vec![component], None).expect("one component")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn family(&self) -> Option<&Component> {
        self.family.as_ref()
    }

    /// The component at index `t`, taking family members into account.
    pub fn component(&self, t: u64) -> Option<&Component> {
        match self.components.get(t as usize) {
            Some(c) => Some(c),
            None => self.family.as_ref(),
        }
    }

    pub fn count(&self) -> ComponentCount {
        if self.family.is_some() {
            ComponentCount::Omega
        } else {
            ComponentCount::Finite(self.components.len())
        }
    }

    /// Both the component list and every domain are finite.
    pub fn is_finite(&self) -> bool {
        self.family.is_none() && self.components.iter().all(|c| c.is_bench())
    }

    fn all_components(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().chain(self.family.iter())
    }

    pub fn degree(&self) -> DegreeDescriptor {
        DegreeDescriptor { count: self.count(), components: self.all_components().map(Component::degree).collect() }
    }

    pub fn sign(&self) -> SignDescriptor {
        SignDescriptor {
            count_sign: if self.family.is_some() { Sign::Plus } else { Sign::Zero },
            components: self.all_components().map(Component::sign).collect(),
        }
    }

    pub fn order_type(&self) -> Result<OrderType, OrdinalError> {
        let mut parts = self.components.iter().map(Component::order_type).collect::<Result<Vec<_>, _>>()?;
        if let Some(f) = &self.family {
            parts.push(f.order_type()?.repeat_omega()?);
        }
        ordinal::sum(&parts)
    }

    /// Raw value at `(t, indices)`; domain membership is not checked.
    pub fn eval(&self, t: u64, indices: &[i64]) -> Result<i128, EvalError> {
        match self.component(t) {
            Some(c) => c.eval(t, indices),
            None => Err(EvalError::Unbound("t".into())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ShuffleError> {
        let doc: ShuffleDoc = serde_json::from_str(text).map_err(|e| ShuffleError::Json(e.to_string()))?;
        doc.build()
    }

    pub fn to_doc(&self) -> Result<ShuffleDoc, ShuffleError> {
        let components = self.components.iter().map(ComponentDoc::from_component).collect::<Result<_, _>>()?;
        let omega_family = match &self.family {
            Some(f) => match ComponentDoc::from_component(f)? {
                ComponentDoc::Expr { domains, expr, .. } => Some(FamilyDoc { domains, expr }),
                ComponentDoc::Table { .. } => return Err(ShuffleError::FamilyNotExpression),
            },
            None => None,
        };
        Ok(ShuffleDoc { label: self.label.clone(), components, omega_family })
    }

    pub fn to_json(&self) -> Result<String, ShuffleError> {
        let doc = self.to_doc()?;
        Ok(serde_json::to_string_pretty(&doc).expect("documents serialize"))
    }
}

/// The on-disk JSON form of a [`Shuffle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShuffleDoc {
    pub label: String,
    pub components: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_family: Option<FamilyDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentDoc {
    Expr {
        domains: Vec<DomainDoc>,
        expr: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        omega_family: bool,
    },
    Table {
        table: Vec<u64>,
        tail: TailDoc,
        sign: SignDoc,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub domains: Vec<DomainDoc>,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailDoc {
    Identity,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignDoc {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl DomainDoc {
    pub fn to_domain(&self) -> Result<IndexDomain, ShuffleError> {
        let need = |v: Option<i64>, field: &str| {
            v.ok_or_else(|| ShuffleError::InvalidDomain(format!("{} needs `{field}`", self.kind)))
        };
        let d = match self.kind.as_str() {
            "finite_prefix" => {
                let m = need(self.m, "m")?;
                if m <= 0 {
                    return Err(ShuffleError::EmptyDomain);
                }
                IndexDomain::FinitePrefix(m as u64)
            }
            "finite_range" => IndexDomain::FiniteRange(need(self.n, "n")?, need(self.m, "m")?),
            "plus_inf" => IndexDomain::PlusInf { start: self.n.unwrap_or(0) },
            "minus_inf" => IndexDomain::MinusInf { end: self.m.unwrap_or(0) },
            other => return Err(ShuffleError::InvalidDomain(format!("unknown kind `{other}`"))),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_domain(d: &IndexDomain) -> Self {
        let (kind, m, n) = match *d {
            IndexDomain::FinitePrefix(m) => ("finite_prefix", Some(m as i64), None),
            IndexDomain::FiniteRange(n, m) => ("finite_range", Some(m), Some(n)),
            IndexDomain::PlusInf { start } => ("plus_inf", None, (start != 0).then_some(start)),
            IndexDomain::MinusInf { end } => ("minus_inf", (end != 0).then_some(end), None),
        };
        DomainDoc { kind: kind.into(), m, n }
    }
}

fn domains_of(docs: &[DomainDoc]) -> Result<Vec<IndexDomain>, ShuffleError> {
    docs.iter().map(DomainDoc::to_domain).collect()
}

impl ComponentDoc {
    fn from_component(c: &Component) -> Result<Self, ShuffleError> {
        match &c.value {
            ValueMap::Expr(e) => Ok(ComponentDoc::Expr {
                domains: c.domains.iter().map(DomainDoc::from_domain).collect(),
                expr: e.to_string(),
                omega_family: false,
            }),
            ValueMap::Table(t) => Ok(ComponentDoc::Table {
                table: t.values.clone(),
                tail: match t.tail {
                    TableTail::Identity => TailDoc::Identity,
                    TableTail::None => TailDoc::None,
                },
                sign: match t.sign {
                    Orientation::Plus => SignDoc::Plus,
                    Orientation::Minus => SignDoc::Minus,
                },
            }),
            ValueMap::Composed(_) => Err(ShuffleError::Unserializable),
        }
    }
}

impl ShuffleDoc {
    pub fn build(&self) -> Result<Shuffle, ShuffleError> {
        let at = |index: usize| move |e: ShuffleError| ShuffleError::AtComponent { index, source: Box::new(e) };
        let mut components = Vec::new();
        let mut family = None;
        for (index, doc) in self.components.iter().enumerate() {
            if family.is_some() {
                return Err(ShuffleError::OmegaFamilyNotLast);
            }
            match doc {
                ComponentDoc::Expr { domains, expr, omega_family } => {
                    let c = domains_of(domains)
                        .and_then(|d| Component::parse(d, expr, *omega_family))
                        .map_err(at(index))?;
                    if *omega_family {
                        family = Some(c);
                    } else {
                        components.push(c);
                    }
                }
                ComponentDoc::Table { table, tail, sign } => {
                    let table = Table {
                        values: table.clone(),
                        tail: match tail {
                            TailDoc::Identity => TableTail::Identity,
                            TailDoc::None => TableTail::None,
                        },
                        sign: match sign {
                            SignDoc::Plus => Orientation::Plus,
                            SignDoc::Minus => Orientation::Minus,
                        },
                    };
                    components.push(Component::table(table).map_err(at(index))?);
                }
            }
        }
        if let Some(f) = &self.omega_family {
            if family.is_some() {
                return Err(ShuffleError::OmegaFamilyNotLast);
            }
            let index = self.components.len();
            family = Some(domains_of(&f.domains).and_then(|d| Component::parse(d, &f.expr, true)).map_err(at(index))?);
        }
        Shuffle::new(self.label.clone(), components, family)
    }
}
