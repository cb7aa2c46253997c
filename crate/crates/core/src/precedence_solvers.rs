//! Exact solvers when the piles must be reclaimed in a fixed chain order.

use num_traits::{Signed, Zero};

use crate::model::{q, Direction, Instance, PathBuilder, Q, ReclaimAssignment, Reclaimer, ReclaimerPath, Schedule, SolveResult};
use crate::{Error, Result};

/// Default cap on the number of `(j, x0, x1)` cells of the two-reclaimer table.
pub const DEFAULT_MAX_STATES: u64 = 20_000_000;

/// Optimal cost and sweep directions for one reclaimer that starts and ends
/// at 0 and reclaims `piles` in the given order.
pub(crate) fn chain_cost(piles: &[(i64, i64)], s: Q) -> (Q, Vec<Direction>) {
    let n = piles.len();
    // fr[j] / fl[j]: best remaining time when standing at the right / left end
    // of the j-th pile of the chain padded with a (0, 0) dummy at both ends.
    let at = |j: usize| if j == 0 || j > n { (0, 0) } else { piles[j - 1] };
    let mut fr = vec![Q::zero(); n + 2];
    let mut fl = vec![Q::zero(); n + 2];
    let mut pick_r = vec![Direction::LeftToRight; n + 1];
    let mut pick_l = vec![Direction::LeftToRight; n + 1];
    for j in (0..=n).rev() {
        let (lj, rj) = at(j);
        let (ln, rn) = at(j + 1);
        let len = q(rn - ln);
        let tail = |from: i64| {
            let ltr = q((from - ln).abs()) / s + fr[j + 1];
            let rtl = q((from - rn).abs()) / s + fl[j + 1];
            if ltr <= rtl { (ltr, Direction::LeftToRight) } else { (rtl, Direction::RightToLeft) }
        };
        let (vr, dr) = tail(rj);
        let (vl, dl) = tail(lj);
        fr[j] = len + vr;
        fl[j] = len + vl;
        pick_r[j] = dr;
        pick_l[j] = dl;
    }
    let mut dirs = Vec::with_capacity(n);
    let mut at_right = false;
    for j in 0..n {
        let d = if at_right { pick_r[j] } else { pick_l[j] };
        dirs.push(d);
        at_right = d == Direction::LeftToRight;
    }
    (fl[0], dirs)
}

fn require_chain(inst: &Instance) -> Result<Vec<usize>> {
    match &inst.precedence {
        Some(c) => Ok(c.clone()),
        None => Err(Error::Unsupported("this solver needs a precedence chain".into())),
    }
}

/// `(l, r)` of each chain entry, scaled by `scale`.
fn chain_piles(inst: &Instance, chain: &[usize], scale: i64) -> Result<Vec<(i64, i64)>> {
    chain
        .iter()
        .map(|&id| {
            let p = inst.pile(id).ok_or_else(|| Error::Invalid(format!("chain names unknown pile {}", id)))?;
            Ok((p.l * scale, p.r * scale))
        })
        .collect()
}

/// Single reclaimer under a precedence chain; `R1` stays parked at `L`.
pub fn dp_single_precedence(inst: &Instance) -> Result<SolveResult> {
    let chain = require_chain(inst)?;
    let piles = chain_piles(inst, &chain, 1)?;
    let (_, dirs) = chain_cost(&piles, inst.speed);
    let mut b = PathBuilder::new(q(0), inst.speed);
    let mut assignments = Vec::with_capacity(chain.len());
    for ((&id, &(l, r)), &d) in chain.iter().zip(&piles).zip(&dirs) {
        let (from, to) = if d == Direction::LeftToRight { (l, r) } else { (r, l) };
        b.travel_to(q(from));
        let t_start = b.time();
        b.reclaim_to(q(to));
        assignments.push(ReclaimAssignment { pile: id, reclaimer: Reclaimer::R0, t_start, t_end: b.time(), direction: d });
    }
    b.travel_to(q(0));
    let schedule = Schedule { paths: [b.finish(), ReclaimerPath::parked(inst.length)], assignments };
    Ok(SolveResult::new(schedule, "single-precedence-dp", "R0 alone"))
}

/// A stage of the two-reclaimer DP: piles `1..=j` of the chain are done and
/// the reclaimers stand at grid points `x0 <= x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainState {
    pub j: usize,
    pub x0: i64,
    pub x1: i64,
}

/// Grid points a passive reclaimer can reach: `[lo, hi]`, possibly empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReachableSet {
    pub lo: i64,
    pub hi: i64,
}

impl ReachableSet {
    /// `R0` from `x` within `reach` grid units, staying at or below `y`.
    pub fn below(x: i64, y: i64, reach: i64) -> Self {
        ReachableSet { lo: std::cmp::max(0, x - reach), hi: std::cmp::min(y, x + reach) }
    }

    /// `R1` from `x` within `reach`, staying at or above `y`, on `[0, top]`.
    pub fn above(x: i64, y: i64, reach: i64, top: i64) -> Self {
        ReachableSet { lo: std::cmp::max(y, x - reach), hi: std::cmp::min(top, x + reach) }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

/// Rail scaled so that every position the DP needs is an integer. With
/// `s = a / b`, one unit of length becomes `b` grid units, travel covers `a`
/// grid units per unit time and reclaiming covers `b`.
#[derive(Debug, Clone, Copy)]
struct Grid {
    size: i64,
    a: i64,
    b: i64,
}

impl Grid {
    fn new(inst: &Instance) -> Self {
        let (a, b) = (*inst.speed.numer(), *inst.speed.denom());
        Grid { size: inst.length * b, a, b }
    }

    fn travel(&self, d: i64) -> Q {
        Q::new(d.abs(), self.a)
    }

    fn reclaim(&self, d: i64) -> Q {
        Q::new(d.abs(), self.b)
    }

    /// Grid units a passive reclaimer covers while the active one spends `t`.
    fn reach(&self, t: Q) -> i64 {
        (t * q(self.a)).floor().to_integer()
    }

    fn to_rail(self, x: i64) -> Q {
        Q::new(x, self.b)
    }
}

/// One option at a stage: which reclaimer is active, its sweep, and where the
/// passive one ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Move {
    active: Reclaimer,
    direction: Direction,
    passive_to: i64,
}

fn row_start(width: usize, x0: usize) -> usize {
    x0 * width - x0 * x0.saturating_sub(1) / 2
}

/// `f(j, x0, x1)` for every stage, stored as upper triangles over `x0 <= x1`.
struct Table {
    g: Grid,
    /// Chain piles in grid units.
    piles: Vec<(i64, i64)>,
    values: Vec<Vec<Q>>,
}

impl Table {
    fn cells_per_stage(g: &Grid) -> u64 {
        let w = g.size as u64 + 1;
        w * (w + 1) / 2
    }

    fn get(&self, j: usize, x0: i64, x1: i64) -> Q {
        let w = self.g.size as usize + 1;
        self.values[j][row_start(w, x0 as usize) + (x1 - x0) as usize]
    }

    /// Best of the four options at `(j, x0, x1)` using stage `j + 1`. Ties go
    /// to the earlier option, then to the lower passive target.
    fn best_move(&self, j: usize, x0: i64, x1: i64) -> (Q, Move) {
        let (l, r) = self.piles[j];
        let len = self.g.reclaim(r - l);
        let mut best: Option<(Q, Move)> = None;
        for (active, direction) in [
            (Reclaimer::R0, Direction::LeftToRight),
            (Reclaimer::R0, Direction::RightToLeft),
            (Reclaimer::R1, Direction::LeftToRight),
            (Reclaimer::R1, Direction::RightToLeft),
        ] {
            let (from, to) = if direction == Direction::LeftToRight { (l, r) } else { (r, l) };
            let here = if active == Reclaimer::R0 { x0 } else { x1 };
            let t = self.g.travel(here - from) + len;
            let reach = self.g.reach(t);
            let set = if active == Reclaimer::R0 {
                ReachableSet::above(x1, to, reach, self.g.size)
            } else {
                ReachableSet::below(x0, to, reach)
            };
            for x in set.lo..=set.hi {
                let v = if active == Reclaimer::R0 { self.get(j + 1, to, x) } else { self.get(j + 1, x, to) } + t;
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, Move { active, direction, passive_to: x }));
                }
            }
        }
        best.expect("the passive reclaimer can always stay put or step aside")
    }
}

/// Value of a piecewise-linear function given by breakpoints at time `t`.
fn eval_pl(points: &[(Q, Q)], t: Q) -> Q {
    let k = points.partition_point(|p| p.0 <= t);
    if k == 0 {
        return points[0].1;
    }
    if k == points.len() {
        return points[k - 1].1;
    }
    let ((t0, x0), (t1, x1)) = (points[k - 1], points[k]);
    x0 + (x1 - x0) * (t - t0) / (t1 - t0)
}

/// Pointwise max (`upper`) or min of two piecewise-linear functions on a
/// common time span, as breakpoints.
fn envelope(f: &[(Q, Q)], g: &[(Q, Q)], upper: bool) -> Vec<(Q, Q)> {
    let mut ts: Vec<Q> = f.iter().chain(g).map(|p| p.0).collect();
    ts.sort();
    ts.dedup();
    let pick = |t: Q| {
        let (a, b) = (eval_pl(f, t), eval_pl(g, t));
        if upper { std::cmp::max(a, b) } else { std::cmp::min(a, b) }
    };
    let mut out = Vec::with_capacity(ts.len() * 2);
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        out.push((t0, pick(t0)));
        let d0 = eval_pl(f, t0) - eval_pl(g, t0);
        let d1 = eval_pl(f, t1) - eval_pl(g, t1);
        if d0 * d1 < Q::zero() {
            let tc = t0 + (t1 - t0) * d0 / (d0 - d1);
            out.push((tc, pick(tc)));
        }
    }
    if let Some(&t) = ts.last() {
        out.push((t, pick(t)));
    }
    out
}

/// Two reclaimers under a precedence chain, exact on the scaled grid.
/// Fails with a resource error when the table would exceed `max_states` cells.
pub fn dp_two_precedence(inst: &Instance, max_states: u64) -> Result<SolveResult> {
    let chain = require_chain(inst)?;
    let g = Grid::new(inst);
    let n = chain.len();
    let per_stage = Table::cells_per_stage(&g);
    let total = per_stage.saturating_mul(n as u64 + 1);
    if total > max_states {
        return Err(Error::Resource(format!("{} table cells needed, cap is {}", total, max_states)));
    }
    let piles = chain_piles(inst, &chain, g.b)?;
    let mut table = Table { g, piles, values: vec![Vec::new(); n + 1] };
    let mut last = Vec::with_capacity(per_stage as usize);
    for x0 in 0..=g.size {
        for x1 in x0..=g.size {
            last.push(std::cmp::max(g.travel(x0), g.travel(g.size - x1)));
        }
    }
    table.values[n] = last;
    for j in (0..n).rev() {
        let mut stage = Vec::with_capacity(per_stage as usize);
        for x0 in 0..=g.size {
            for x1 in x0..=g.size {
                stage.push(table.best_move(j, x0, x1).0);
            }
        }
        table.values[j] = stage;
    }
    let optimum = table.get(0, 0, g.size);
    let schedule = reconstruct(inst, &table, &chain);
    let violations = crate::model::validate_schedule(inst, &schedule, crate::model::Mode::Precedence);
    if let Some(v) = violations.first() {
        return Err(Error::Infeasible(format!("reconstructed schedule is invalid: {}", v.message)));
    }
    let res = SolveResult::new(schedule, "two-precedence-dp", format!("grid {} x {}", n, g.size));
    debug_assert_eq!(res.makespan, optimum);
    Ok(res)
}

/// Replays the argmin choices. The passive reclaimer heads for its target at
/// full speed and is pushed ahead of the active one whenever they would meet.
fn reconstruct(inst: &Instance, table: &Table, chain: &[usize]) -> Schedule {
    let g = table.g;
    let s = inst.speed;
    let mut builders = [PathBuilder::new(q(0), s), PathBuilder::new(q(inst.length), s)];
    let mut assignments = Vec::with_capacity(chain.len());
    let (mut x0, mut x1) = (0, g.size);
    for (j, &id) in chain.iter().enumerate() {
        let (_, mv) = table.best_move(j, x0, x1);
        let (l, r) = table.piles[j];
        let (from, to) = if mv.direction == Direction::LeftToRight { (l, r) } else { (r, l) };
        let (act, pas) = (mv.active.index(), mv.active.other().index());
        let t0 = builders[act].time();
        let here = builders[act].pos();
        let t_start = t0 + (g.to_rail(from) - here).abs() / s;
        let t_end = t_start + g.reclaim(to - from);
        let mut active = vec![(t0, here), (t_start, g.to_rail(from)), (t_end, g.to_rail(to))];
        active.dedup_by_key(|p| p.0);
        let p_here = builders[pas].pos();
        let target = g.to_rail(mv.passive_to);
        let mut free = vec![(t0, p_here), (t0 + (target - p_here).abs() / s, target), (t_end, target)];
        free.dedup_by_key(|p| p.0);
        for (t, x) in envelope(&active, &free, mv.active == Reclaimer::R0) {
            builders[pas].push(t, x);
        }
        builders[act].push(t_start, g.to_rail(from));
        builders[act].push(t_end, g.to_rail(to));
        assignments.push(ReclaimAssignment { pile: id, reclaimer: mv.active, t_start, t_end, direction: mv.direction });
        if mv.active == Reclaimer::R0 {
            (x0, x1) = (to, mv.passive_to);
        } else {
            (x0, x1) = (mv.passive_to, to);
        }
    }
    let [mut b0, mut b1] = builders;
    b0.travel_to(q(0));
    b1.travel_to(q(inst.length));
    Schedule { paths: [b0.finish(), b1.finish()], assignments }
}
