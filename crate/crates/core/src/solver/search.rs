//! Depth-first branch-and-bound over set-inclusion decisions.
//!
//! Sets are decided in descending cardinality (then descending bit pattern),
//! so every strict superset of a set is decided before the set itself. Two
//! consequences drive the propagation:
//!
//! * Including `T` is consistent iff `T ∪ U` is included for every included
//!   `U`. Since all those unions are already decided, the only way to fail is
//!   that some `T ∪ U` was excluded; such `T` are tracked in `forbidden`.
//! * Excluding a set never forbids anything immediately (no included set is a
//!   proper subset of it yet). Including `T` forbids every `S` with `S ∪ T`
//!   excluded, computed as a bitset gather.
//!
//! Bounds: each element `e` has remaining capacity `cap - count_e`; every
//! additional set either contains `e` (at most the capacity) or avoids it (at
//! most the available sets without `e`). Under a twin requirement, each
//! element needs a pair `(S, S ∪ {e})` whose two sets are still available.
//!
//! Symmetry: every goal and twin rule is invariant under relabeling elements.
//! For `n <= SYMMETRY_MAX_N` the search keeps only assignments that are
//! lexicographically maximal (in decision order) among their relabelings.
//! Each cardinality level is a permutation-invariant block of the order, so
//! the test runs when a level is completed, against the permutations that
//! still tie on all earlier levels.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::bits::Bits;

/// Which twin pairs an element must be the difference of.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum TwinRule {
    None,
    /// Any pair, including the one whose big twin is `[n]`.
    Any,
    /// Pairs whose big twin is not `[n]`.
    NonTrivial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Maximize the set count under a fixed degree cap.
    MaxSets { cap: u32 },
    /// Minimize the degree over families with exactly `m` sets.
    MinDegree { m: u32 },
}

pub(crate) struct Problem {
    pub n: u8,
    pub goal: Goal,
    pub twins: TwinRule,
    /// `f(n-1, a)` when searching only for families that beat it; enables the
    /// deletion bound `m(F) <= f(n-1,a) + t_e(F)` for every element `e`.
    pub deletion_base: Option<u32>,
    /// Incumbent objective: a set count to beat (max) or a degree to beat (min).
    pub incumbent: Option<u32>,
}

/// Budget and statistics shared by every search of one solve call.
pub(crate) struct Tracker {
    pub deadline: Option<Instant>,
    pub max_nodes: Option<u64>,
    pub nodes: AtomicU64,
    pub propagations: AtomicU64,
    pub aborted: AtomicBool,
}

impl Tracker {
    fn charge(&self, nodes: u64, props: u64) -> bool {
        let total = self.nodes.fetch_add(nodes, Ordering::Relaxed) + nodes;
        self.propagations.fetch_add(props, Ordering::Relaxed);
        let over_nodes = self.max_nodes.is_some_and(|m| total > m);
        let over_time = self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    pub fn is_aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }
}

pub(crate) struct SearchResult {
    /// Best objective found that beats the incumbent, with its sets.
    pub found: Option<(u32, Vec<u16>)>,
}

#[derive(Copy, Clone)]
struct Node<const W: usize> {
    inc: Bits<W>,
    exc: Bits<W>,
    forbidden: Bits<W>,
    counts: [u32; 16],
    size: u32,
    pos: usize,
}

struct Engine<'a, const W: usize> {
    problem: &'a Problem,
    tracker: &'a Tracker,
    order: Vec<u16>,
    universe: Bits<W>,
    /// `has[b]`: positions whose set contains bit `b`.
    has: Vec<Bits<W>>,
    /// Little-twin positions for element `b + 1` under the twin rule.
    pair_rule: Vec<Bits<W>>,
    /// Little-twin positions for element `b + 1`, trivial pairs included.
    pair_any: Vec<Bits<W>>,
    full: u16,
    symmetry: Option<Symmetry>,
    best: AtomicU32,
    found: Mutex<Option<(u32, Vec<u16>)>>,
}

const FLUSH_EVERY: u64 = 1024;

/// Largest ground set for which all `n!` relabelings are tabulated.
pub(crate) const SYMMETRY_MAX_N: u8 = 7;

/// Relabelings of `[n]` as image tables over masks.
struct Symmetry {
    size: usize,
    /// `image[p * size + s]`: the mask of `s` under permutation `p`.
    image: Vec<u16>,
    count: usize,
    /// Decision positions where each cardinality level ends, top level first.
    level_end: Vec<usize>,
}

impl Symmetry {
    fn new(n: u8, order: &[u16]) -> Self {
        let size = 1usize << n;
        let mut perm: Vec<u8> = (0..n).collect();
        let mut image = Vec::new();
        let mut count = 0;
        loop {
            for s in 0..size {
                let mut t = 0u16;
                for (b, &to) in perm.iter().enumerate() {
                    if s >> b & 1 == 1 {
                        t |= 1 << to;
                    }
                }
                image.push(t);
            }
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let mut level_end = Vec::new();
        for (i, w) in order.windows(2).enumerate() {
            if w[0].count_ones() != w[1].count_ones() {
                level_end.push(i + 1);
            }
        }
        level_end.push(order.len());
        Symmetry {
            size,
            image,
            count,
            level_end,
        }
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Per-worker permutation lists: `ties[k]` holds the permutations that leave
/// the assignment of levels `0..=k` unchanged on the current search path.
struct SymState {
    ties: Vec<Vec<u16>>,
}

impl<'a, const W: usize> Engine<'a, W> {
    fn new(problem: &'a Problem, tracker: &'a Tracker) -> Self {
        let n = problem.n;
        let full = ((1u32 << n) - 1) as u16;
        let mut order: Vec<u16> = (0..=full).collect();
        order.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(b.cmp(a)));
        let has: Vec<Bits<W>> = (1..=n as usize).map(|e| Bits::containing(n, e)).collect();
        let universe = Bits::<W>::universe(n);
        let mut pair_rule = Vec::new();
        let mut pair_any = Vec::new();
        for b in 0..n as usize {
            let little = universe.minus(&has[b]);
            pair_any.push(little);
            let mut nontrivial = little;
            if problem.twins == TwinRule::NonTrivial {
                let top = (full & !(1 << b)) as usize;
                nontrivial.0[top >> 6] &= !(1u64 << (top & 63));
            }
            pair_rule.push(nontrivial);
        }
        let symmetry = (2..=SYMMETRY_MAX_N).contains(&n).then(|| Symmetry::new(n, &order));
        let best = match problem.goal {
            Goal::MaxSets { .. } => problem.incumbent.unwrap_or(0),
            Goal::MinDegree { .. } => problem.incumbent.unwrap_or(u32::MAX),
        };
        Engine {
            problem,
            tracker,
            order,
            universe,
            has,
            pair_rule,
            pair_any,
            full,
            symmetry,
            best: AtomicU32::new(best),
            found: Mutex::new(None),
        }
    }

    fn root(&self) -> Node<W> {
        Node {
            inc: Bits::ZERO,
            exc: Bits::ZERO,
            forbidden: Bits::ZERO,
            counts: [0; 16],
            size: 0,
            pos: 0,
        }
    }

    #[inline]
    fn cap(&self) -> u32 {
        match self.problem.goal {
            Goal::MaxSets { cap } => cap,
            Goal::MinDegree { m } => {
                let best = self.best.load(Ordering::Relaxed);
                best.saturating_sub(1).min(m)
            }
        }
    }

    #[inline]
    fn pairs(&self, alive: &Bits<W>, b: usize, masks: &[Bits<W>]) -> Bits<W> {
        alive.and(&alive.shift_down(1 << b)).and(&masks[b])
    }

    /// False when the subtree cannot contain a family beating the incumbent.
    fn viable(&self, node: &Node<W>) -> bool {
        let n = self.problem.n as usize;
        let cap = self.cap();
        let mut saturated = Bits::<W>::ZERO;
        for b in 0..n {
            if node.counts[b] > cap {
                return false;
            }
            if node.counts[b] == cap {
                saturated.or_assign(&self.has[b]);
            }
        }
        let open = self
            .universe
            .minus(&node.inc)
            .minus(&node.exc)
            .minus(&node.forbidden)
            .minus(&saturated);
        let mut extra = open.count();
        for b in 0..n {
            let without = open.minus(&self.has[b]).count();
            extra = extra.min(cap - node.counts[b] + without);
        }
        let reachable = node.size + extra;
        match self.problem.goal {
            Goal::MaxSets { .. } => {
                if reachable <= self.best.load(Ordering::Relaxed) {
                    return false;
                }
            }
            Goal::MinDegree { m } => {
                if reachable < m {
                    return false;
                }
            }
        }

        let alive = node.inc.or(&open);
        if self.problem.twins != TwinRule::None {
            for b in 0..n {
                if self.pairs(&alive, b, &self.pair_rule).is_zero() {
                    return false;
                }
            }
        }
        if let Some(base) = self.problem.deletion_base {
            let mut bound = u32::MAX;
            for b in 0..n {
                bound = bound.min(base + self.pairs(&alive, b, &self.pair_any).count());
            }
            if bound <= self.best.load(Ordering::Relaxed) {
                return false;
            }
        }
        true
    }

    fn twins_covered(&self, inc: &Bits<W>) -> bool {
        self.problem.twins == TwinRule::None
            || (0..self.problem.n as usize).all(|b| !self.pairs(inc, b, &self.pair_rule).is_zero())
    }

    fn offer(&self, value: u32, inc: &Bits<W>) {
        let better = |best: u32| match self.problem.goal {
            Goal::MaxSets { .. } => value > best,
            Goal::MinDegree { .. } => value < best,
        };
        let mut found = self.found.lock().unwrap();
        let best = self.best.load(Ordering::Relaxed);
        if better(best) {
            self.best.store(value, Ordering::Relaxed);
            let sets = inc.iter_ones().map(|i| i as u16).collect();
            *found = Some((value, sets));
        }
    }

    #[inline]
    fn include(&self, node: &mut Node<W>, x: u16) -> bool {
        node.inc.set(x as usize);
        let mut bits = x;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            node.counts[b] += 1;
        }
        node.size += 1;
        node.pos += 1;
        if node.exc.is_zero() {
            return false;
        }
        let blocked = node.exc.gather_union(x, &self.has);
        node.forbidden.or_assign(&blocked);
        true
    }

    #[inline]
    fn exclude(&self, node: &mut Node<W>, x: u16) {
        node.exc.set(x as usize);
        node.pos += 1;
    }

    #[inline]
    fn can_include(&self, node: &Node<W>, x: u16) -> bool {
        if node.forbidden.get(x as usize) {
            return false;
        }
        let cap = self.cap();
        let mut bits = x;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if node.counts[b] >= cap {
                return false;
            }
        }
        true
    }

    fn sym_state(&self) -> Option<SymState> {
        let sym = self.symmetry.as_ref()?;
        let mut ties = vec![Vec::new(); sym.level_end.len()];
        ties[0] = (0..sym.count as u16).collect();
        Some(SymState { ties })
    }

    /// Refines the tie list for level `k` from level `k - 1`. False when some
    /// relabeling yields a lexicographically larger assignment.
    fn refine(&self, state: &mut SymState, k: usize, inc: &Bits<W>) -> bool {
        let sym = self.symmetry.as_ref().unwrap();
        let range = sym.level_end[k - 1]..sym.level_end[k];
        let (done, rest) = state.ties.split_at_mut(k);
        let next = &mut rest[0];
        next.clear();
        for &p in &done[k - 1] {
            let table = &sym.image[p as usize * sym.size..][..sym.size];
            let mut keep = true;
            for &s in &self.order[range.clone()] {
                let have = inc.get(s as usize);
                let mapped = inc.get(table[s as usize] as usize);
                if have != mapped {
                    if mapped {
                        return false;
                    }
                    keep = false;
                    break;
                }
            }
            if keep {
                next.push(p);
            }
        }
        true
    }

    /// Symmetry test for a node that has just completed a level.
    fn canonical(&self, state: &mut Option<SymState>, node: &Node<W>) -> bool {
        let (Some(sym), Some(state)) = (&self.symmetry, state.as_mut()) else {
            return true;
        };
        match sym.level_end.binary_search(&node.pos) {
            Ok(k) if k > 0 => self.refine(state, k, &node.inc),
            _ => true,
        }
    }

    /// Rebuilds tie lists for levels finished strictly before `node.pos`.
    fn resume(&self, state: &mut Option<SymState>, node: &Node<W>) -> bool {
        let (Some(sym), Some(st)) = (&self.symmetry, state.as_mut()) else {
            return true;
        };
        for k in 1..sym.level_end.len() {
            if sym.level_end[k] >= node.pos {
                break;
            }
            if !self.refine(st, k, &node.inc) {
                return false;
            }
        }
        true
    }

    /// Whether the search stops at this node, recording it if it is a solution.
    fn terminal(&self, node: &Node<W>) -> bool {
        match self.problem.goal {
            Goal::MaxSets { .. } => {
                if node.pos == self.order.len() {
                    if self.twins_covered(&node.inc) {
                        self.offer(node.size, &node.inc);
                    }
                    return true;
                }
            }
            Goal::MinDegree { m } => {
                if node.size == m {
                    if self.twins_covered(&node.inc) {
                        let degree = node.counts[..self.problem.n as usize]
                            .iter()
                            .copied()
                            .max()
                            .unwrap_or(0);
                        self.offer(degree, &node.inc);
                    }
                    return true;
                }
                if node.pos == self.order.len() {
                    return true;
                }
            }
        }
        false
    }

    /// Runs the search below `start`. With `split_depth`, nodes reaching that
    /// depth are returned instead of explored.
    fn run(&self, start: Node<W>, split_depth: Option<usize>) -> Vec<Node<W>> {
        let mut frontier = Vec::new();
        let mut stack = vec![start];
        let mut nodes = 0u64;
        let mut props = 0u64;
        let must_include_full = self.problem.twins != TwinRule::None;
        let mut sym = self.sym_state();
        if !self.resume(&mut sym, &start) {
            return frontier;
        }
        'outer: while let Some(mut node) = stack.pop() {
            loop {
                nodes += 1;
                if nodes == FLUSH_EVERY {
                    if !self.tracker.charge(nodes, props) {
                        return frontier;
                    }
                    nodes = 0;
                    props = 0;
                }
                if !self.viable(&node) || !self.canonical(&mut sym, &node) || self.terminal(&node) {
                    continue 'outer;
                }
                if split_depth == Some(node.pos) {
                    frontier.push(node);
                    continue 'outer;
                }
                let x = self.order[node.pos];
                // Every element lies in a big twin, so the union of all sets is [n].
                let forced = must_include_full && x == self.full;
                if self.can_include(&node, x) {
                    if !forced {
                        let mut other = node;
                        self.exclude(&mut other, x);
                        stack.push(other);
                    }
                    if self.include(&mut node, x) {
                        props += 1;
                    }
                } else if forced {
                    continue 'outer;
                } else {
                    self.exclude(&mut node, x);
                }
            }
        }
        self.tracker.charge(nodes, props);
        frontier
    }
}

fn search_width<const W: usize>(
    problem: &Problem,
    tracker: &Tracker,
    threads: usize,
) -> SearchResult {
    let engine = Engine::<W>::new(problem, tracker);
    if threads <= 1 {
        engine.run(engine.root(), None);
    } else {
        let depth = engine.order.len().min(2 * problem.n as usize + 6);
        let frontier = engine.run(engine.root(), Some(depth));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            frontier.into_par_iter().for_each(|node| {
                if !tracker.is_aborted() {
                    engine.run(node, None);
                }
            })
        });
    }
    SearchResult {
        found: engine.found.into_inner().unwrap(),
    }
}

pub(crate) fn search(problem: &Problem, tracker: &Tracker, threads: usize) -> SearchResult {
    match problem.n {
        0..=6 => search_width::<1>(problem, tracker, threads),
        7 => search_width::<2>(problem, tracker, threads),
        8 => search_width::<4>(problem, tracker, threads),
        9 => search_width::<8>(problem, tracker, threads),
        10 => search_width::<16>(problem, tracker, threads),
        11 => search_width::<32>(problem, tracker, threads),
        12 => search_width::<64>(problem, tracker, threads),
        13 => search_width::<128>(problem, tracker, threads),
        14 => search_width::<256>(problem, tracker, threads),
        15 => search_width::<512>(problem, tracker, threads),
        _ => search_width::<1024>(problem, tracker, threads),
    }
}
