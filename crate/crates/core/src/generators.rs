//! Seeded random instances and the hardness constructions built from
//! `Partition` and 1,6-`Partition` inputs.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{q, Direction, Instance, PathBuilder, Q, ReclaimAssignment, Reclaimer, Schedule};
use crate::positioning::LengthsInstance;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Free,
    Precedence,
    Lengths,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Placed(Instance),
    Lengths(LengthsInstance),
}

/// `k` disjoint integer piles inside `[0, length]`, adjacency allowed, drawn
/// uniformly through the shifted cut-point bijection.
fn random_pad(rng: &mut ChaCha8Rng, k: usize, length: i64) -> Vec<(i64, i64)> {
    let mut ys: Vec<i64> = index::sample(rng, length as usize + k, 2 * k).into_iter().map(|v| v as i64).collect();
    ys.sort_unstable();
    (0..k).map(|j| (ys[2 * j] - j as i64, ys[2 * j + 1] - j as i64)).collect()
}

pub fn gen_random(seed: u64, n: usize, length: i64, speed: Q, mode: GenMode) -> Result<Generated> {
    if length <= 0 {
        return Err(Error::Invalid("rail length must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if mode == GenMode::Lengths {
        let cap = 3 * length / 2;
        if n as i64 > cap {
            return Err(Error::Invalid(format!("{} piles cannot fit in total length {}", n, cap)));
        }
        if n == 0 {
            return Ok(Generated::Lengths(LengthsInstance { lengths: vec![], length, speed }));
        }
        loop {
            let total = rng.gen_range(n as i64..=cap);
            let mut cuts: Vec<i64> = index::sample(&mut rng, total as usize - 1, n - 1).into_iter().map(|v| v as i64 + 1).collect();
            cuts.sort_unstable();
            cuts.insert(0, 0);
            cuts.push(total);
            let lengths: Vec<i64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
            if lengths.iter().all(|&p| p <= length) {
                return Ok(Generated::Lengths(LengthsInstance { lengths, length, speed }));
            }
        }
    }
    if n as i64 > 2 * length {
        return Err(Error::Invalid(format!("{} piles do not fit on two pads of length {}", n, length)));
    }
    let lo = n.saturating_sub(length as usize);
    let hi = std::cmp::min(n, length as usize);
    let n1 = rng.gen_range(lo..=hi);
    let pad1 = random_pad(&mut rng, n1, length);
    let pad2 = random_pad(&mut rng, n - n1, length);
    let mut inst = Instance::new(length, speed, &pad1, &pad2);
    if mode == GenMode::Precedence {
        let mut chain: Vec<usize> = (1..=n).collect();
        chain.shuffle(&mut rng);
        inst = inst.with_precedence(chain);
    }
    Ok(Generated::Placed(inst))
}

/// A hardness instance with its decision threshold and, for YES inputs with a
/// supplied certificate, a schedule that meets the threshold.
#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    pub instance: Generated,
    pub target: Q,
    /// Indices into the input list (0-based) of the certificate subset.
    pub yes_witness: Option<Vec<usize>>,
    /// Pile id and the reclaimer it must go to.
    pub fixed_assignment: Option<Vec<(usize, Reclaimer)>>,
    /// For positioning constructions: the placed instance the witness uses.
    pub witness_placement: Option<Instance>,
    pub witness_schedule: Option<Schedule>,
}

fn half_sum(a: &[i64]) -> Result<i64> {
    if a.iter().any(|&v| v <= 0) {
        return Err(Error::Invalid("elements must be positive".into()));
    }
    let sum: i64 = a.iter().sum();
    if sum % 2 != 0 || sum == 0 {
        return Err(Error::Invalid(format!("element sum {} is not a positive even number", sum)));
    }
    Ok(sum / 2)
}

/// Indices of a subset of `a` summing to `target`, by a table over sums.
pub fn find_subset(a: &[i64], target: i64) -> Option<Vec<usize>> {
    if target < 0 {
        return None;
    }
    let t = target as usize;
    // from[v] = index of the element that first reached sum v.
    let mut from: Vec<Option<usize>> = vec![None; t + 1];
    let mut reach = vec![false; t + 1];
    reach[0] = true;
    for (i, &v) in a.iter().enumerate() {
        let v = v as usize;
        for s in (v..=t).rev() {
            if !reach[s] && reach[s - v] {
                reach[s] = true;
                from[s] = Some(i);
            }
        }
    }
    if !reach[t] {
        return None;
    }
    let mut out = Vec::new();
    let mut s = t;
    while s > 0 {
        let i = from[s].expect("reachable sums record their last element");
        out.push(i);
        s -= a[i] as usize;
    }
    out.sort_unstable();
    Some(out)
}

fn check_witness(a: &[i64], subset: &[usize], want: i64) -> Result<()> {
    let mut seen = vec![false; a.len()];
    let mut sum = 0;
    for &i in subset {
        if i >= a.len() || seen[i] {
            return Err(Error::Invalid(format!("bad witness index {}", i)));
        }
        seen[i] = true;
        sum += a[i];
    }
    if sum != want {
        return Err(Error::Invalid(format!("witness sums to {}, expected {}", sum, want)));
    }
    Ok(())
}

struct Route {
    b: PathBuilder,
    who: Reclaimer,
}

impl Route {
    fn new(who: Reclaimer, start: i64, speed: Q) -> Self {
        Route { b: PathBuilder::new(q(start), speed), who }
    }

    fn sweep(&mut self, out: &mut Vec<ReclaimAssignment>, pile: usize, from: i64, to: i64) {
        self.b.travel_to(q(from));
        let t_start = self.b.time();
        self.b.reclaim_to(q(to));
        let direction = if to > from { Direction::LeftToRight } else { Direction::RightToLeft };
        out.push(ReclaimAssignment { pile, reclaimer: self.who, t_start, t_end: self.b.time(), direction });
    }
}

/// Two dummies of length `2B` at both ends of pad `P1`, the elements in
/// between; threshold `3B + 1` with `L = 6B`, `s = 5B`.
pub fn gen_partition_thm2(a: &[i64], witness: Option<&[usize]>) -> Result<ReductionArtifact> {
    let b = half_sum(a)?;
    let (length, speed) = (6 * b, q(5 * b));
    let mut pad = vec![(0, 2 * b)];
    let mut x = 2 * b;
    for &v in a {
        pad.push((x, x + v));
        x += v;
    }
    pad.push((4 * b, 6 * b));
    let inst = Instance::new(length, speed, &pad, &[]);
    let mut art = ReductionArtifact {
        instance: Generated::Placed(inst),
        target: q(3 * b + 1),
        yes_witness: None,
        fixed_assignment: None,
        witness_placement: None,
        witness_schedule: None,
    };
    if let Some(subset) = witness {
        check_witness(a, subset, b)?;
        let mut asg = Vec::new();
        let mut r0 = Route::new(Reclaimer::R0, 0, speed);
        r0.sweep(&mut asg, 1, 0, 2 * b);
        let mut picked = subset.to_vec();
        picked.sort_unstable();
        for &i in &picked {
            let (l, r) = pad[i + 1];
            r0.sweep(&mut asg, i + 2, l, r);
        }
        r0.b.travel_to(q(4 * b));
        r0.b.travel_to(q(0));
        let mut r1 = Route::new(Reclaimer::R1, length, speed);
        r1.b.travel_to(q(2 * b));
        for i in (0..a.len()).filter(|i| !subset.contains(i)) {
            let (l, r) = pad[i + 1];
            r1.sweep(&mut asg, i + 2, l, r);
        }
        r1.sweep(&mut asg, a.len() + 2, 4 * b, 6 * b);
        art.yes_witness = Some(subset.to_vec());
        art.witness_schedule = Some(Schedule { paths: [r0.b.finish(), r1.b.finish()], assignments: asg });
    }
    Ok(art)
}

/// Contiguous-assignment hardness instance on `L = 53B`, `s = 2`; threshold
/// `75B` under the fixed assignment.
pub fn gen_contiguous_thm6(a: &[i64], witness: Option<&[usize]>) -> Result<ReductionArtifact> {
    let b = half_sum(a)?;
    let m = a.len();
    let length = 53 * b;
    let speed = q(2);
    let mut pad1 = vec![(0, 9 * b), (9 * b, 35 * b), (35 * b, 51 * b)];
    let mut spans = Vec::with_capacity(m);
    let mut right = length;
    for &v in a {
        spans.push((right - v, right));
        right -= v;
    }
    pad1.extend(spans.iter().rev().copied());
    let pad2 = [(0, 35 * b), (35 * b, 41 * b), (41 * b, 43 * b)];
    let inst = Instance::new(length, speed, &pad1, &pad2);
    // Element j (0-based) sits at id m + 3 - j; dummies keep ids 1..=3 and m+4..=m+6.
    let elem_id = |j: usize| m + 3 - j;
    let mut fixed: Vec<(usize, Reclaimer)> = (0..m).map(|j| (elem_id(j), Reclaimer::R1)).collect();
    fixed.extend([(1, Reclaimer::R0), (2, Reclaimer::R1), (3, Reclaimer::R1)]);
    fixed.extend([(m + 4, Reclaimer::R0), (m + 5, Reclaimer::R0), (m + 6, Reclaimer::R1)]);
    fixed.sort_unstable_by_key(|f| f.0);
    let mut art = ReductionArtifact {
        instance: Generated::Placed(inst),
        target: q(75 * b),
        yes_witness: None,
        fixed_assignment: Some(fixed),
        witness_placement: None,
        witness_schedule: None,
    };
    if let Some(subset) = witness {
        check_witness(a, subset, b)?;
        let mut asg = Vec::new();
        let mut r0 = Route::new(Reclaimer::R0, 0, speed);
        r0.b.travel_to(q(35 * b));
        r0.sweep(&mut asg, m + 5, 35 * b, 41 * b);
        r0.sweep(&mut asg, m + 4, 35 * b, 0);
        r0.sweep(&mut asg, 1, 0, 9 * b);
        r0.b.travel_to(q(0));
        let mut r1 = Route::new(Reclaimer::R1, length, speed);
        for j in (0..m).filter(|j| subset.contains(j)) {
            let (l, r) = spans[j];
            r1.sweep(&mut asg, elem_id(j), r, l);
        }
        r1.sweep(&mut asg, 3, 51 * b, 35 * b);
        r1.sweep(&mut asg, m + 6, 43 * b, 41 * b);
        r1.sweep(&mut asg, 2, 35 * b, 9 * b);
        for j in (0..m).rev().filter(|j| !subset.contains(j)) {
            let (l, r) = spans[j];
            r1.sweep(&mut asg, elem_id(j), l, r);
        }
        r1.b.travel_to(q(length));
        art.yes_witness = Some(subset.to_vec());
        art.witness_schedule = Some(Schedule { paths: [r0.b.finish(), r1.b.finish()], assignments: asg });
    }
    Ok(art)
}

/// Lengths `a` on a rail of `2B` at unit speed, threshold `2B`. With
/// `two_reclaimers`, two dummies of length `B` are appended.
pub fn gen_positioning_partition(a: &[i64], two_reclaimers: bool, witness: Option<&[usize]>) -> Result<ReductionArtifact> {
    let b = half_sum(a)?;
    let mut lengths = a.to_vec();
    if two_reclaimers {
        lengths.extend([b, b]);
    }
    let li = LengthsInstance { lengths, length: 2 * b, speed: q(1) };
    let mut art = ReductionArtifact {
        instance: Generated::Lengths(li),
        target: q(2 * b),
        yes_witness: None,
        fixed_assignment: None,
        witness_placement: None,
        witness_schedule: None,
    };
    if let Some(subset) = witness {
        check_witness(a, subset, b)?;
        let side = |inside: bool, from: i64| {
            let mut x = from;
            let mut out = Vec::new();
            for (i, &v) in a.iter().enumerate().filter(|(i, _)| subset.contains(i) == inside) {
                out.push((x, x + v, i));
                x += v;
            }
            out
        };
        let (mut asg, speed) = (Vec::new(), q(1));
        let (placement, schedule);
        if two_reclaimers {
            // P1 holds the dummies; P2 the subset on [0, B] and the rest on [B, 2B].
            let low = side(true, 0);
            let high = side(false, b);
            let pad2: Vec<(i64, i64)> = low.iter().chain(&high).map(|&(l, r, _)| (l, r)).collect();
            let inst = Instance::new(2 * b, speed, &[(0, b), (b, 2 * b)], &pad2);
            let mut r0 = Route::new(Reclaimer::R0, 0, speed);
            r0.sweep(&mut asg, 1, 0, b);
            for (k, &(l, r, _)) in low.iter().enumerate().rev() {
                r0.sweep(&mut asg, 3 + k, r, l);
            }
            let mut r1 = Route::new(Reclaimer::R1, 2 * b, speed);
            r1.sweep(&mut asg, 2, 2 * b, b);
            for (k, &(l, r, _)) in high.iter().enumerate() {
                r1.sweep(&mut asg, 3 + low.len() + k, l, r);
            }
            placement = inst;
            schedule = Schedule { paths: [r0.b.finish(), r1.b.finish()], assignments: asg };
        } else {
            let p1 = side(true, 0);
            let p2 = side(false, 0);
            let strip = |v: &[(i64, i64, usize)]| v.iter().map(|&(l, r, _)| (l, r)).collect::<Vec<_>>();
            let inst = Instance::new(2 * b, speed, &strip(&p1), &strip(&p2));
            let mut r0 = Route::new(Reclaimer::R0, 0, speed);
            for (k, &(l, r, _)) in p1.iter().enumerate() {
                r0.sweep(&mut asg, 1 + k, l, r);
            }
            for (k, &(l, r, _)) in p2.iter().enumerate().rev() {
                r0.sweep(&mut asg, 1 + p1.len() + k, r, l);
            }
            r0.b.travel_to(q(0));
            placement = inst;
            schedule = Schedule { paths: [r0.b.finish(), crate::model::ReclaimerPath::parked(2 * b)], assignments: asg };
        }
        art.yes_witness = Some(subset.to_vec());
        art.witness_placement = Some(placement);
        art.witness_schedule = Some(schedule);
    }
    Ok(art)
}

/// Ordered lengths `10B, 29B, B, 7B, a...` on `L = 36B`, `s = 3`, threshold
/// `54B`. `witness` selects the elements summing to `B`.
pub fn gen_one_six_prec(a: &[i64], witness: Option<&[usize]>) -> Result<ReductionArtifact> {
    if a.iter().any(|&v| v <= 0) {
        return Err(Error::Invalid("elements must be positive".into()));
    }
    let sum: i64 = a.iter().sum();
    if sum == 0 || sum % 7 != 0 {
        return Err(Error::Invalid(format!("element sum {} is not a positive multiple of 7", sum)));
    }
    let b = sum / 7;
    let length = 36 * b;
    let speed = q(3);
    let mut lengths = vec![10 * b, 29 * b, b, 7 * b];
    lengths.extend_from_slice(a);
    let mut art = ReductionArtifact {
        instance: Generated::Lengths(LengthsInstance { lengths, length, speed }),
        target: q(54 * b),
        yes_witness: None,
        fixed_assignment: None,
        witness_placement: None,
        witness_schedule: None,
    };
    let Some(small) = witness else { return Ok(art) };
    check_witness(a, small, b)?;
    // (pad, l, r) for each chain position.
    let mut spans: Vec<(u8, i64, i64)> = vec![(1, 0, 10 * b), (2, 7 * b, 36 * b), (2, 6 * b, 7 * b), (1, 10 * b, 17 * b)];
    let (mut low, mut cursor) = (6 * b, 17 * b);
    for (i, &v) in a.iter().enumerate() {
        if small.contains(&i) {
            spans.push((1, cursor, cursor + v));
            cursor += v;
        } else {
            spans.push((2, low - v, low));
            low -= v;
            cursor += 3 * v;
        }
    }
    let mut pads: [Vec<(i64, i64, usize)>; 2] = [Vec::new(), Vec::new()];
    for (k, &(pad, l, r)) in spans.iter().enumerate() {
        pads[pad as usize - 1].push((l, r, k));
    }
    pads.iter_mut().for_each(|v| v.sort_unstable());
    let mut id_of = vec![0; spans.len()];
    for (id, &(_, _, k)) in pads[0].iter().chain(&pads[1]).enumerate() {
        id_of[k] = id + 1;
    }
    let strip = |v: &[(i64, i64, usize)]| v.iter().map(|&(l, r, _)| (l, r)).collect::<Vec<_>>();
    let placed = Instance::new(length, speed, &strip(&pads[0]), &strip(&pads[1])).with_precedence(id_of.clone());

    // Each pile starts as soon as the previous one ends; the idle reclaimer
    // repositions in the meantime.
    let mut asg = Vec::new();
    let mut routes = [Route::new(Reclaimer::R0, 0, speed), Route::new(Reclaimer::R1, length, speed)];
    let owner = |k: usize| match k {
        0 | 2 => Reclaimer::R0,
        1 | 3 => Reclaimer::R1,
        _ if small.contains(&(k - 4)) => Reclaimer::R1,
        _ => Reclaimer::R0,
    };
    let mut clock = Q::from_integer(0);
    for (k, &(_, l, r)) in spans.iter().enumerate() {
        let who = owner(k);
        let (from, to) = match (k, who) {
            (0, _) | (3, _) => (l, r),
            (_, Reclaimer::R0) => (r, l),
            (_, Reclaimer::R1) if k == 1 => (r, l),
            _ => (l, r),
        };
        let route = &mut routes[who.index()];
        route.b.travel_to(q(from));
        route.b.wait_until(clock);
        route.sweep(&mut asg, id_of[k], from, to);
        clock = route.b.time();
    }
    let [mut r0, mut r1] = routes;
    r0.b.travel_to(q(0));
    r1.b.travel_to(q(length));
    art.yes_witness = Some(small.to_vec());
    art.witness_placement = Some(placed);
    art.witness_schedule = Some(Schedule { paths: [r0.b.finish(), r1.b.finish()], assignments: asg });
    Ok(art)
}
