use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{EdgeId, Sign, SignedGraph, VertexId};
use crate::error::{Error, Result};

/// Direction of one edge end relative to the vertex it sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Away,
    Toward,
}

impl Dir {
    pub fn reversed(self) -> Dir {
        match self {
            Dir::Away => Dir::Toward,
            Dir::Toward => Dir::Away,
        }
    }

    /// `+1` for away, `-1` for toward.
    pub fn coefficient(self) -> i64 {
        match self {
            Dir::Away => 1,
            Dir::Toward => -1,
        }
    }

    pub fn from_coefficient(c: i64) -> Dir {
        if c >= 0 {
            Dir::Away
        } else {
            Dir::Toward
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Dir::Away => "away",
            Dir::Toward => "toward",
        }
    }
}

/// Dense per-edge storage keyed by [`EdgeId`].
#[derive(Clone, Debug)]
pub struct EdgeMap<T> {
    slots: Vec<Option<T>>,
}

impl<T: PartialEq> PartialEq for EdgeMap<T> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.slots, &other.slots);
        let n = a.len().max(b.len());
        (0..n).all(|i| a.get(i).and_then(|x| x.as_ref()) == b.get(i).and_then(|x| x.as_ref()))
    }
}

impl<T: Eq> Eq for EdgeMap<T> {}

impl<T> Default for EdgeMap<T> {
    fn default() -> Self {
        EdgeMap { slots: Vec::new() }
    }
}

impl<T: Clone> EdgeMap<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Map with `value` on every edge of `g`.
    pub fn filled(g: &SignedGraph, value: T) -> Self {
        let mut m = EdgeMap { slots: vec![None; g.edge_bound()] };
        for e in g.edge_ids() {
            m.slots[e] = Some(value.clone());
        }
        m
    }

    pub fn get(&self, e: EdgeId) -> Option<&T> {
        self.slots.get(e).and_then(|x| x.as_ref())
    }

    pub fn set(&mut self, e: EdgeId, value: T) {
        if self.slots.len() <= e {
            self.slots.resize(e + 1, None);
        }
        self.slots[e] = Some(value);
    }

    pub fn remove(&mut self, e: EdgeId) -> Option<T> {
        self.slots.get_mut(e).and_then(|x| x.take())
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.get(e).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &T)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, x)| x.as_ref().map(|v| (i, v)))
    }

    pub fn len(&self) -> usize {
        self.slots.iter().filter(|x| x.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when the keys are exactly the edge ids of `g`.
    pub fn covers_exactly(&self, g: &SignedGraph) -> bool {
        g.edge_ids().all(|e| self.contains(e)) && self.iter().all(|(e, _)| g.has_edge(e))
    }
}

impl<T: Copy + Default> EdgeMap<T> {
    /// Value on `e`, or the default when unset.
    pub fn at(&self, e: EdgeId) -> T {
        self.get(e).copied().unwrap_or_default()
    }
}

impl<T: Clone> FromIterator<(EdgeId, T)> for EdgeMap<T> {
    fn from_iter<I: IntoIterator<Item = (EdgeId, T)>>(iter: I) -> Self {
        let mut m = EdgeMap::new();
        for (e, v) in iter {
            m.set(e, v);
        }
        m
    }
}

pub type IntFlow = EdgeMap<i64>;
pub type Z3Assignment = EdgeMap<Z3>;

/// Element of the integers mod 3, stored as 0, 1 or 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z3(u8);

impl Z3 {
    pub const ZERO: Z3 = Z3(0);
    pub const ONE: Z3 = Z3(1);
    pub const TWO: Z3 = Z3(2);

    pub fn new(x: i64) -> Z3 {
        Z3(x.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Representative in `{-1, 0, 1}`.
    pub fn balanced(self) -> i64 {
        match self.0 {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inverse(self) -> Z3 {
        assert!(!self.is_zero(), "zero has no inverse");
        self
    }

    pub fn all() -> [Z3; 3] {
        [Z3(0), Z3(1), Z3(2)]
    }
}

impl fmt::Display for Z3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Z3 {
    type Output = Z3;
    fn add(self, o: Z3) -> Z3 {
        Z3((self.0 + o.0) % 3)
    }
}

impl AddAssign for Z3 {
    fn add_assign(&mut self, o: Z3) {
        *self = *self + o;
    }
}

impl Sub for Z3 {
    type Output = Z3;
    fn sub(self, o: Z3) -> Z3 {
        Z3((self.0 + 3 - o.0) % 3)
    }
}

impl Neg for Z3 {
    type Output = Z3;
    fn neg(self) -> Z3 {
        Z3((3 - self.0) % 3)
    }
}

impl Mul for Z3 {
    type Output = Z3;
    fn mul(self, o: Z3) -> Z3 {
        Z3((self.0 * o.0) % 3)
    }
}

/// Values a flow can take: an abelian group with an integer action.
pub trait FlowValue: Copy + Default + PartialEq + Add<Output = Self> + Neg<Output = Self> {
    fn is_zero(&self) -> bool {
        *self == Self::default()
    }

    fn scaled(self, c: i64) -> Self;
}

impl FlowValue for i64 {
    fn scaled(self, c: i64) -> Self {
        self * c
    }
}

impl FlowValue for Z3 {
    fn scaled(self, c: i64) -> Self {
        Z3::new(self.0 as i64 * c)
    }
}

/// Per-edge directions `[at first end, at second end]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    dirs: EdgeMap<[Dir; 2]>,
}

impl Orientation {
    /// Canonical orientation: positive edges away→toward, negative edges
    /// away/away.
    pub fn canonical(g: &SignedGraph) -> Self {
        let mut o = Orientation::default();
        for e in g.edges() {
            let second = match e.sign {
                Sign::Positive => Dir::Toward,
                Sign::Negative => Dir::Away,
            };
            o.dirs.set(e.id, [Dir::Away, second]);
        }
        o
    }

    pub fn get(&self, e: EdgeId) -> [Dir; 2] {
        *self.dirs.get(e).expect("edge has no orientation")
    }

    pub fn try_get(&self, e: EdgeId) -> Option<[Dir; 2]> {
        self.dirs.get(e).copied()
    }

    pub fn set(&mut self, e: EdgeId, d: [Dir; 2]) {
        self.dirs.set(e, d);
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.dirs.remove(e);
    }

    /// Direction of the end of `e` at `v`. For a loop this is the first end;
    /// use [`Orientation::coefficient_at`] when loops matter.
    pub fn dir_at(&self, g: &SignedGraph, e: EdgeId, v: VertexId) -> Dir {
        let r = g.edge(e);
        let d = self.get(e);
        if r.u == v {
            d[0]
        } else {
            debug_assert_eq!(r.v, v);
            d[1]
        }
    }

    /// Total coefficient of `e` in the boundary at `v`: `±1` for an ordinary
    /// end, and the sum over both ends for a loop (so `±2` or `0`).
    pub fn coefficient_at(&self, g: &SignedGraph, e: EdgeId, v: VertexId) -> i64 {
        let r = g.edge(e);
        let d = self.get(e);
        let mut c = 0;
        if r.u == v {
            c += d[0].coefficient();
        }
        if r.v == v {
            c += d[1].coefficient();
        }
        c
    }

    /// Checks the sign rule on every edge of `g`.
    pub fn check(&self, g: &SignedGraph) -> Result<()> {
        for e in g.edges() {
            let Some(d) = self.try_get(e.id) else {
                return Err(Error::Consistency { edge: e.id, detail: "missing".into() });
            };
            let consistent = match e.sign {
                Sign::Positive => d[0] != d[1],
                Sign::Negative => d[0] == d[1],
            };
            if !consistent {
                return Err(Error::Consistency {
                    edge: e.id,
                    detail: format!("{} {}", d[0].word(), d[1].word()),
                });
            }
        }
        Ok(())
    }

    pub fn is_consistent(&self, g: &SignedGraph) -> bool {
        self.check(g).is_ok()
    }
}

/// Outflow minus inflow at `v`; a loop contributes through both ends.
pub fn boundary_at<T: FlowValue>(g: &SignedGraph, o: &Orientation, f: &EdgeMap<T>, v: VertexId) -> T {
    g.incident(v).iter().fold(T::default(), |acc, &e| {
        let val = f.get(e).copied().unwrap_or_default();
        acc + val.scaled(o.coefficient_at(g, e, v))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowViolation {
    MissingValue { edge: EdgeId },
    NonzeroBoundary { vertex: VertexId, boundary: i64 },
    ZeroValue { edge: EdgeId },
    OutOfRange { edge: EdgeId, value: i64 },
}

impl fmt::Display for FlowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowViolation::MissingValue { edge } => write!(f, "edge {edge} has no value"),
            FlowViolation::NonzeroBoundary { vertex, boundary } => {
                write!(f, "boundary at vertex {vertex} is {boundary}")
            }
            FlowViolation::ZeroValue { edge } => write!(f, "edge {edge} carries zero"),
            FlowViolation::OutOfRange { edge, value } => {
                write!(f, "edge {edge} carries {value}, outside the allowed range")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowVerdict {
    Accept,
    Reject(FlowViolation),
}

impl FlowVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, FlowVerdict::Accept)
    }
}

/// Accepts iff `f` is a nowhere-zero `k`-flow: zero boundary everywhere,
/// no zero value, and `|f(e)| <= k - 1`. Clauses are checked in that order.
pub fn verify_flow(g: &SignedGraph, o: &Orientation, f: &IntFlow, k: i64) -> FlowVerdict {
    if let Some(e) = g.edge_ids().find(|&e| !f.contains(e)) {
        return FlowVerdict::Reject(FlowViolation::MissingValue { edge: e });
    }
    for v in g.vertices() {
        let b = boundary_at(g, o, f, v);
        if b != 0 {
            return FlowVerdict::Reject(FlowViolation::NonzeroBoundary { vertex: v, boundary: b });
        }
    }
    if let Some(e) = g.edge_ids().find(|&e| f.at(e) == 0) {
        return FlowVerdict::Reject(FlowViolation::ZeroValue { edge: e });
    }
    if let Some(e) = g.edge_ids().find(|&e| f.at(e).abs() > k - 1) {
        return FlowVerdict::Reject(FlowViolation::OutOfRange { edge: e, value: f.at(e) });
    }
    FlowVerdict::Accept
}
