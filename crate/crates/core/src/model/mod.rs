//! Domain types: stockpiles, instances, reclaimer trajectories and schedules.
//!
//! Every time and position is an exact rational. A reclaimer trajectory is a
//! list of breakpoints `(t, x)` joined by straight segments.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::Error;

pub mod json;
mod validate;

pub use validate::{
    validate_instance, validate_schedule, Mode, Violation, ViolationKind,
};

/// Exact rational used for every time and position.
pub type Q = Ratio<i64>;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// `n / d` as a normalized rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// One of the two storage strips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pad {
    P1,
    P2,
}

impl fmt::Display for Pad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pad::P1 => write!(f, "P1"),
            Pad::P2 => write!(f, "P2"),
        }
    }
}

/// A stockpile occupying `[l, r]` on one pad; reclaiming it takes `r - l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stockpile {
    pub id: usize,
    pub pad: Pad,
    pub l: i64,
    pub r: i64,
}

impl Stockpile {
    pub fn len(&self) -> i64 {
        self.r - self.l
    }

    pub fn is_empty(&self) -> bool {
        self.r <= self.l
    }
}

/// Pad length, travel speed, the piles on each pad (sorted left to right) and
/// an optional reclaim order.
///
/// Pile ids are 1-based: pad `P1` holds ids `1..=n1`, pad `P2` holds
/// `n1+1..=n`, both numbered left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub length: i64,
    pub speed: Q,
    pub pad1: Vec<Stockpile>,
    pub pad2: Vec<Stockpile>,
    pub precedence: Option<Vec<usize>>,
}

impl Instance {
    /// Builds an instance and numbers the piles.
    pub fn new(length: i64, speed: Q, pad1: &[(i64, i64)], pad2: &[(i64, i64)]) -> Self {
        let mk = |pad: Pad, offset: usize, v: &[(i64, i64)]| -> Vec<Stockpile> {
            v.iter()
                .enumerate()
                .map(|(i, &(l, r))| Stockpile { id: offset + i + 1, pad, l, r })
                .collect()
        };
        Instance {
            length,
            speed,
            pad1: mk(Pad::P1, 0, pad1),
            pad2: mk(Pad::P2, pad1.len(), pad2),
            precedence: None,
        }
    }

    pub fn with_precedence(mut self, chain: Vec<usize>) -> Self {
        self.precedence = Some(chain);
        self
    }

    pub fn n1(&self) -> usize {
        self.pad1.len()
    }

    pub fn n(&self) -> usize {
        self.pad1.len() + self.pad2.len()
    }

    /// All piles in id order.
    pub fn piles(&self) -> impl Iterator<Item = &Stockpile> {
        self.pad1.iter().chain(self.pad2.iter())
    }

    /// Pile by 1-based id.
    pub fn pile(&self, id: usize) -> Option<&Stockpile> {
        if id == 0 {
            return None;
        }
        let i = id - 1;
        if i < self.pad1.len() {
            self.pad1.get(i)
        } else {
            self.pad2.get(i - self.pad1.len())
        }
    }

    pub fn total_length(&self) -> i64 {
        self.piles().map(Stockpile::len).sum()
    }

    /// Rightmost pile endpoint, or 0 without piles.
    pub fn max_right(&self) -> i64 {
        self.piles().map(|p| p.r).max().unwrap_or(0)
    }

    /// Reclaim order; piles in id order when none is given.
    pub fn chain(&self) -> Vec<usize> {
        match &self.precedence {
            Some(c) => c.clone(),
            None => (1..=self.n()).collect(),
        }
    }
}

/// The two reclaimers: `R0` is anchored at 0, `R1` at the pad length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reclaimer {
    R0,
    R1,
}

impl Reclaimer {
    pub fn index(self) -> usize {
        match self {
            Reclaimer::R0 => 0,
            Reclaimer::R1 => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Reclaimer::R0
        } else {
            Reclaimer::R1
        }
    }

    pub fn anchor(self, length: i64) -> i64 {
        match self {
            Reclaimer::R0 => 0,
            Reclaimer::R1 => length,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Reclaimer::R0 => Reclaimer::R1,
            Reclaimer::R1 => Reclaimer::R0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    /// Signed reclaim slope.
    pub fn slope(self) -> i64 {
        match self {
            Direction::LeftToRight => 1,
            Direction::RightToLeft => -1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

/// Piecewise-linear position function given by its breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReclaimerPath {
    pub points: Vec<(Q, Q)>,
}

impl ReclaimerPath {
    pub fn new(points: Vec<(Q, Q)>) -> Self {
        ReclaimerPath { points }
    }

    /// A reclaimer that never leaves `x`.
    pub fn parked(x: i64) -> Self {
        ReclaimerPath { points: vec![(Q::zero(), q(x))] }
    }

    pub fn end_time(&self) -> Q {
        self.points.last().map(|p| p.0).unwrap_or_else(Q::zero)
    }

    pub fn end_pos(&self) -> Q {
        self.points.last().map(|p| p.1).unwrap_or_else(Q::zero)
    }

    /// Position at time `t` for `t` in `[0, end_time]`.
    pub fn position(&self, t: Q) -> Result<Q, Error> {
        let end = self.end_time();
        if self.points.is_empty() || t < Q::zero() || t > end {
            return Err(Error::OutOfDomain { t, end });
        }
        Ok(self.position_clamped(t))
    }

    /// Position at `t`, holding the first/last breakpoint outside the domain.
    pub fn position_clamped(&self, t: Q) -> Q {
        let pts = &self.points;
        if pts.is_empty() {
            return Q::zero();
        }
        if t <= pts[0].0 {
            return pts[0].1;
        }
        let k = pts.partition_point(|p| p.0 <= t);
        if k >= pts.len() {
            return pts[pts.len() - 1].1;
        }
        let (t0, x0) = pts[k - 1];
        let (t1, x1) = pts[k];
        x0 + (x1 - x0) * (t - t0) / (t1 - t0)
    }

    /// Segments as `(t0, x0, t1, x1)`.
    pub fn segments(&self) -> impl Iterator<Item = (Q, Q, Q, Q)> + '_ {
        self.points.windows(2).map(|w| (w[0].0, w[0].1, w[1].0, w[1].1))
    }
}

/// Incremental construction of a path. Consecutive segments with equal slope
/// are merged into one.
#[derive(Debug, Clone)]
pub struct PathBuilder {
    points: Vec<(Q, Q)>,
    speed: Q,
}

impl PathBuilder {
    pub fn new(start: Q, speed: Q) -> Self {
        PathBuilder { points: vec![(Q::zero(), start)], speed }
    }

    pub fn starting_at(t: Q, x: Q, speed: Q) -> Self {
        PathBuilder { points: vec![(t, x)], speed }
    }

    pub fn time(&self) -> Q {
        self.points[self.points.len() - 1].0
    }

    pub fn pos(&self) -> Q {
        self.points[self.points.len() - 1].1
    }

    /// Appends a breakpoint. Zero-duration moves are ignored.
    pub fn push(&mut self, t: Q, x: Q) {
        let (tl, xl) = self.points[self.points.len() - 1];
        if t == tl {
            debug_assert!(x == xl, "instantaneous jump in path");
            return;
        }
        if self.points.len() >= 2 {
            let (tp, xp) = self.points[self.points.len() - 2];
            if (xl - xp) * (t - tl) == (x - xl) * (tl - tp) {
                let last = self.points.len() - 1;
                self.points[last] = (t, x);
                return;
            }
        }
        self.points.push((t, x));
    }

    /// Moves to `x` at travel speed.
    pub fn travel_to(&mut self, x: Q) {
        let d = (x - self.pos()).abs();
        let t = self.time() + d / self.speed;
        self.push(t, x);
    }

    /// Moves to `x` at reclaim speed.
    pub fn reclaim_to(&mut self, x: Q) {
        let d = (x - self.pos()).abs();
        let t = self.time() + d;
        self.push(t, x);
    }

    /// Idles until time `t` (no-op if `t` is not later than now).
    pub fn wait_until(&mut self, t: Q) {
        if t > self.time() {
            let x = self.pos();
            self.push(t, x);
        }
    }

    pub fn finish(self) -> ReclaimerPath {
        ReclaimerPath { points: self.points }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReclaimAssignment {
    pub pile: usize,
    pub reclaimer: Reclaimer,
    pub t_start: Q,
    pub t_end: Q,
    pub direction: Direction,
}

/// Both trajectories plus one reclaim record per pile (several for a pile cut
/// between reclaimers in a preemptive schedule).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub paths: [ReclaimerPath; 2],
    pub assignments: Vec<ReclaimAssignment>,
}

impl Schedule {
    /// Both reclaimers parked, nothing reclaimed.
    pub fn idle(length: i64) -> Self {
        Schedule {
            paths: [ReclaimerPath::parked(0), ReclaimerPath::parked(length)],
            assignments: Vec::new(),
        }
    }

    pub fn path(&self, r: Reclaimer) -> &ReclaimerPath {
        &self.paths[r.index()]
    }
}

/// Latest return time of the two reclaimers.
pub fn makespan(sched: &Schedule) -> Q {
    std::cmp::max(sched.paths[0].end_time(), sched.paths[1].end_time())
}

/// Outcome of a solver: makespan, schedule and which solver produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub makespan: Q,
    pub schedule: Schedule,
    pub solver: &'static str,
    pub detail: String,
    pub preemptive: bool,
}

impl SolveResult {
    pub fn new(schedule: Schedule, solver: &'static str, detail: impl Into<String>) -> Self {
        SolveResult {
            makespan: makespan(&schedule),
            schedule,
            solver,
            detail: detail.into(),
            preemptive: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_inside_segment() {
        let p = ReclaimerPath::new(vec![(q(0), q(0)), (q(2), q(10))]);
        assert_eq!(p.position(q(1)).unwrap(), q(5));
    }

    #[test]
    fn endpoint_and_out_of_domain() {
        let p = ReclaimerPath::new(vec![(q(0), q(0)), (q(2), q(10)), (q(12), q(0))]);
        assert_eq!(p.position(q(12)).unwrap(), q(0));
        assert!(matches!(p.position(qr(25, 2)), Err(Error::OutOfDomain { .. })));
        assert!(p.position(q(-1)).is_err());
    }

    #[test]
    fn zigzag_left_path() {
        let p = ReclaimerPath::new(vec![
            (q(0), q(0)),
            (q(2), q(10)),
            (q(12), q(0)),
            (qr(62, 5), q(2)),
            (qr(72, 5), q(0)),
        ]);
        assert_eq!(p.position(qr(62, 5)).unwrap(), q(2));
        assert_eq!(p.position(qr(67, 5)).unwrap(), q(1));
    }

    #[test]
    fn builder_merges_collinear_segments() {
        let mut b = PathBuilder::new(q(0), q(2));
        b.reclaim_to(q(2));
        b.reclaim_to(q(4));
        b.travel_to(q(6));
        b.wait_until(q(3));
        let p = b.finish();
        assert_eq!(p.points, vec![(q(0), q(0)), (q(4), q(4)), (q(5), q(6))]);
    }

    #[test]
    fn pile_lookup_by_id() {
        let inst = Instance::new(12, q(5), &[(0, 2), (2, 12)], &[(0, 10), (10, 12)]);
        assert_eq!(inst.pile(3).unwrap().pad, Pad::P2);
        assert_eq!(inst.pile(3).unwrap().l, 0);
        assert!(inst.pile(0).is_none());
        assert!(inst.pile(5).is_none());
        assert_eq!(inst.total_length(), 24);
    }
}
