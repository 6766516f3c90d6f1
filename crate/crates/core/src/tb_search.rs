//! Exact best-first enumeration of tail-biting codewords.
//!
//! For a start state `s`, a backward Viterbi pass that only admits paths
//! ending in `s` gives, at every trellis node, the best completion back to
//! `s`. Following those completions from `s` yields the best codeword with
//! that start. Every emitted codeword splits the remaining space into
//! branches that share its prefix and take the other input at one later
//! stage, each scored exactly by its prefix plus best completion. A single
//! heap over all starts therefore pops codewords in global metric order.
//!
//! Starts are opened lazily. The best path ending in `s` from any start and
//! the best path leaving `s` toward any end both bound every codeword of
//! start `s`, so a start is opened only once the heap top falls to its
//! bound. At high SNR one start usually suffices.
//!
//! The result is the exact top `L` of the tail-biting codebook under the
//! ranking of [`crate::list_viterbi`]; every candidate is certified.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::list_viterbi::{
    branch_metric, path_metric, rank_order, single_survivor, stages, Path, PathCandidate,
};
use crate::tbcc::Trellis;

/// A set of codewords: start `start`, first `len` inputs fixed to the low
/// bits of `prefix`, trellis at `state` after them.
#[derive(Clone, Copy, Debug)]
struct Branch {
    /// Prefix metric plus best completion.
    value: f64,
    start: u32,
    len: u32,
    prefix: u64,
    prefix_metric: f64,
    state: u32,
}

impl Branch {
    /// Prefix left-aligned so that distinct branches compare as their words.
    fn aligned(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            self.prefix << (64 - self.len)
        }
    }
}

impl PartialEq for Branch {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Branch {}

impl PartialOrd for Branch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Greater is better: larger value, then lower start, then smaller word.
impl Ord for Branch {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(other.start.cmp(&self.start))
            .then(other.aligned().cmp(&self.aligned()))
    }
}

/// Per-stage branch metrics indexed by output label.
fn branch_tables(llrs: &[f64], c: usize) -> Vec<f64> {
    let mut bm = Vec::with_capacity((llrs.len() / c) << c);
    for chunk in llrs.chunks_exact(c) {
        bm.extend((0..1u8 << c).map(|label| branch_metric(label, chunk)));
    }
    bm
}

/// Best completion from each `(stage, state)` node; `end` restricts the
/// final state, `None` admits any. Row `t` holds stage `t`, row `k` the end.
fn backward(trellis: &Trellis, bm: &[f64], k: usize, end: Option<usize>) -> Vec<f64> {
    let n = trellis.num_states();
    let c = trellis.outputs();
    let mut table = vec![f64::NEG_INFINITY; (k + 1) * n];
    match end {
        Some(s) => table[k * n + s] = 0.0,
        None => table[k * n..].fill(0.0),
    }
    for t in (0..k).rev() {
        let (head, tail) = table.split_at_mut((t + 1) * n);
        let (row, next) = (&mut head[t * n..], &tail[..n]);
        let stage = &bm[t << c..(t + 1) << c];
        for (x, slot) in row.iter_mut().enumerate() {
            let m0 = stage[trellis.label(x, 0) as usize] + next[trellis.next_state(x, 0)];
            let m1 = stage[trellis.label(x, 1) as usize] + next[trellis.next_state(x, 1)];
            *slot = m0.max(m1);
        }
    }
    table
}

/// The exact `list_size` best tail-biting codewords, best first.
pub fn tb_list_decode(
    llrs: &[f64],
    trellis: &Trellis,
    list_size: usize,
) -> Result<Vec<PathCandidate>> {
    let k = stages(llrs, trellis, list_size)?;
    let n = trellis.num_states();
    let c = trellis.outputs();

    // One Viterbi pass: best path into each state from any start.
    let (into, _) = single_survivor(llrs, trellis);
    if list_size == 1 {
        // A tail-biting survivor strictly above every other end state's
        // best path is the unique top codeword.
        if let Some(p) = into
            .iter()
            .enumerate()
            .filter(|&(s, p)| p.start as usize == s && is_tail_biting(p, n))
            .map(|(_, p)| p)
            .max_by(|a, b| rank_order(b, a))
        {
            let beaten = into
                .iter()
                .enumerate()
                .all(|(s, q)| s == p.start as usize || q.metric < p.metric);
            if beaten {
                return Ok(vec![candidate(k, *p, 0)]);
            }
        }
    }

    let bm = branch_tables(llrs, c);
    let from = backward(trellis, &bm, k, None);
    let mut order: Vec<(f64, usize)> = (0..n)
        .map(|s| (into[s].metric.min(from[s]), s))
        .filter(|&(ub, _)| ub > f64::NEG_INFINITY)
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut pending = order.into_iter().peekable();

    let mut tables: Vec<Option<Vec<f64>>> = vec![None; n];
    let mut heap: BinaryHeap<Branch> = BinaryHeap::new();
    let mut out: Vec<Path> = Vec::with_capacity(list_size.min(1 << k.min(20)));
    while out.len() < list_size {
        // Bounds and exact values sum in different orders; a small slack
        // keeps rounding from deferring a start past its turn.
        while let Some(&(ub, s)) = pending.peek() {
            let open = match heap.peek() {
                None => true,
                Some(top) => ub + 1e-9 * (1.0 + ub.abs()) >= top.value,
            };
            if !open {
                break;
            }
            pending.next();
            let table = backward(trellis, &bm, k, Some(s));
            let value = table[s];
            if value > f64::NEG_INFINITY {
                heap.push(Branch {
                    value,
                    start: s as u32,
                    len: 0,
                    prefix: 0,
                    prefix_metric: 0.0,
                    state: s as u32,
                });
            }
            tables[s] = Some(table);
        }
        let Some(branch) = heap.pop() else { break };
        let table = tables[branch.start as usize]
            .as_deref()
            .expect("opened start");
        let (mut word, mut metric, mut x) =
            (branch.prefix, branch.prefix_metric, branch.state as usize);
        for t in branch.len as usize..k {
            let stage = &bm[t << c..(t + 1) << c];
            let next = &table[(t + 1) * n..(t + 2) * n];
            let step = |b: u8| {
                let d = stage[trellis.label(x, b) as usize];
                (
                    d,
                    trellis.next_state(x, b),
                    d + next[trellis.next_state(x, b)],
                )
            };
            let (e0, e1) = (step(0), step(1));
            // Ties go to input 0, the smaller word.
            let (bit, (d, y, _), (da, ya, va)) = if e0.2 >= e1.2 {
                (0u8, e0, e1)
            } else {
                (1u8, e1, e0)
            };
            if va > f64::NEG_INFINITY {
                heap.push(Branch {
                    value: metric + va,
                    start: branch.start,
                    len: t as u32 + 1,
                    prefix: (word << 1) | u64::from(1 - bit),
                    prefix_metric: metric + da,
                    state: ya as u32,
                });
            }
            word = (word << 1) | u64::from(bit);
            metric += d;
            x = y;
        }
        debug_assert_eq!(x, branch.start as usize);
        out.push(Path {
            metric: path_metric(trellis, word, k, branch.start as usize, llrs),
            word,
            start: branch.start,
        });
    }
    out.sort_by(rank_order);
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(rank, p)| candidate(k, p, rank))
        .collect())
}

fn is_tail_biting(p: &Path, num_states: usize) -> bool {
    let v = num_states.trailing_zeros();
    let mask = (num_states - 1) as u64;
    ((p.word & mask).reverse_bits() >> (64 - v)) == u64::from(p.start)
}

fn candidate(k: usize, p: Path, rank: usize) -> PathCandidate {
    PathCandidate {
        message: p.word,
        len: k,
        metric: p.metric,
        start_state: p.start as usize,
        end_state: p.start as usize,
        rank,
        certified: true,
    }
}
