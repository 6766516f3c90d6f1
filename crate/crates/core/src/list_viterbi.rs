//! Parallel list Viterbi decoding over a tail-biting trellis.
//!
//! One trellis pass starts every state at metric zero and lets each path
//! remember the state it started from. Every state keeps the `L` best paths
//! reaching it; at the end only paths whose final state equals their
//! starting state are valid tail-biting codewords. Those are emitted as one
//! globally ranked list.
//!
//! Path metric is the correlation `sum_i (1 - 2 c_i) * llr_i` (larger is
//! better). Ties are broken by lower start state, then by lexicographically
//! smaller message.

use std::cmp::Ordering;

use crate::adaptive::{Candidate, ListDecoder};
use crate::bits::BitBlock;
use crate::error::{Error, Result};
use crate::tb_search::tb_list_decode;
use crate::tbcc::{ConvCodeSpec, Trellis};

/// A decoded tail-biting path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathCandidate {
    /// Input bits packed MSB-first into the `len` low bits.
    pub message: u64,
    pub len: usize,
    pub metric: f64,
    pub start_state: usize,
    pub end_state: usize,
    pub rank: usize,
    /// No pruned tail-biting path scores higher. The certified candidates
    /// are exactly the best tail-biting codewords, in order.
    pub certified: bool,
}

impl PathCandidate {
    pub fn message_bits(&self) -> BitBlock {
        BitBlock::from_word(self.message, self.len)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Path {
    pub(crate) metric: f64,
    pub(crate) word: u64,
    pub(crate) start: u32,
}

/// Total order: better paths compare as `Less`.
pub(crate) fn rank_order(a: &Path, b: &Path) -> Ordering {
    b.metric
        .partial_cmp(&a.metric)
        .unwrap_or(Ordering::Equal)
        .then(a.start.cmp(&b.start))
        .then(a.word.cmp(&b.word))
}

/// Correlation of one trellis branch with its slice of LLRs, accumulated in
/// generator order.
#[inline]
pub fn branch_metric(label: u8, llrs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (j, &x) in llrs.iter().enumerate() {
        if (label >> j) & 1 == 1 {
            acc -= x;
        } else {
            acc += x;
        }
    }
    acc
}

/// Metric of a packed message walked from `start`, summed stage by stage
/// exactly as the decoder does.
pub fn path_metric(trellis: &Trellis, word: u64, k: usize, start: usize, llrs: &[f64]) -> f64 {
    let c = trellis.outputs();
    let (labels, _) = trellis.walk(word, k, start);
    labels
        .iter()
        .zip(llrs.chunks_exact(c))
        .fold(0.0, |acc, (&l, chunk)| acc + branch_metric(l, chunk))
}

/// Runs the list Viterbi algorithm with `list_size` paths per state and
/// returns all surviving tail-biting paths, best first.
pub fn lva_decode(llrs: &[f64], trellis: &Trellis, list_size: usize) -> Result<Vec<PathCandidate>> {
    let k = stages(llrs, trellis, list_size)?;
    let (survivors, bound) = if list_size == 1 {
        single_survivor(llrs, trellis)
    } else {
        list_survivors(llrs, trellis, list_size)
    };
    Ok(finish(survivors, bound, trellis.num_states(), k))
}

/// Trellis length implied by `llrs`, after checking the decoder inputs.
pub(crate) fn stages(llrs: &[f64], trellis: &Trellis, list_size: usize) -> Result<usize> {
    let c = trellis.outputs();
    if list_size == 0 {
        return Err(Error::InvalidArgument(
            "list size must be at least 1".into(),
        ));
    }
    if llrs.is_empty() || !llrs.len().is_multiple_of(c) {
        return Err(Error::InvalidArgument(format!(
            "{} LLRs is not a positive multiple of {c} outputs per stage",
            llrs.len()
        )));
    }
    let k = llrs.len() / c;
    if k > 64 {
        return Err(Error::InvalidArgument(format!(
            "{k} trellis stages exceed the 64-bit path register"
        )));
    }
    if k < trellis.memory() {
        return Err(Error::InputTooShort {
            needed: trellis.memory(),
            got: k,
        });
    }
    Ok(k)
}

/// Up to `list_size` survivors per state, grouped by final state, and the
/// prune bound: every path not kept scores at most the worst survivor of a
/// full list at its end state.
fn list_survivors(llrs: &[f64], trellis: &Trellis, list_size: usize) -> (Vec<Path>, f64) {
    let c = trellis.outputs();
    let k = llrs.len() / c;
    let num_states = trellis.num_states();
    let mut cur: Vec<Path> = (0..num_states)
        .map(|s| Path {
            metric: 0.0,
            word: 0,
            start: s as u32,
        })
        .collect();
    let mut cur_off: Vec<usize> = (0..num_states).collect();
    let mut cur_len: Vec<usize> = vec![1; num_states];

    let mut next: Vec<Path> = Vec::with_capacity(num_states * list_size.min(1 << k.min(20)));
    let mut next_off = vec![0usize; num_states];
    let mut next_len = vec![0usize; num_states];
    let mut bm = vec![0.0f64; 1 << c];

    for chunk in llrs.chunks_exact(c) {
        for (label, m) in bm.iter_mut().enumerate() {
            *m = branch_metric(label as u8, chunk);
        }
        next.clear();
        for ns in 0..num_states {
            let [(p0, bit), (p1, _)] = trellis.predecessors(ns);
            let a = &cur[cur_off[p0]..cur_off[p0] + cur_len[p0]];
            let b = &cur[cur_off[p1]..cur_off[p1] + cur_len[p1]];
            let (da, db) = (
                bm[trellis.label(p0, bit) as usize],
                bm[trellis.label(p1, bit) as usize],
            );
            next_off[ns] = next.len();
            let (mut i, mut j) = (0, 0);
            for _ in 0..list_size.min(a.len() + b.len()) {
                // Same order as `rank_order` on the extended paths; the
                // appended bit is shared, so words compare unshifted.
                let take_a = if j == b.len() {
                    true
                } else if i == a.len() {
                    false
                } else {
                    let (ma, mb) = (a[i].metric + da, b[j].metric + db);
                    if ma != mb {
                        ma > mb
                    } else {
                        (a[i].start, a[i].word) <= (b[j].start, b[j].word)
                    }
                };
                let (p, d) = if take_a {
                    i += 1;
                    (&a[i - 1], da)
                } else {
                    j += 1;
                    (&b[j - 1], db)
                };
                next.push(Path {
                    metric: p.metric + d,
                    word: (p.word << 1) | bit as u64,
                    start: p.start,
                });
            }
            next_len[ns] = next.len() - next_off[ns];
        }
        std::mem::swap(&mut cur, &mut next);
        std::mem::swap(&mut cur_off, &mut next_off);
        std::mem::swap(&mut cur_len, &mut next_len);
    }

    let mut survivors: Vec<Path> = Vec::new();
    let mut bound = f64::NEG_INFINITY;
    for s in 0..num_states {
        let list = &cur[cur_off[s]..cur_off[s] + cur_len[s]];
        // A short list dropped nothing along the way.
        if list.len() == list_size {
            bound = bound.max(list[list_size - 1].metric);
        }
        survivors.extend_from_slice(list);
    }
    (survivors, bound)
}

/// One survivor per state; the `list_size == 1` case of the general
/// recursion with the same comparison rule, without list bookkeeping.
pub(crate) fn single_survivor(llrs: &[f64], trellis: &Trellis) -> (Vec<Path>, f64) {
    let c = trellis.outputs();
    let num_states = trellis.num_states();
    let mut cur: Vec<Path> = (0..num_states)
        .map(|s| Path {
            metric: 0.0,
            word: 0,
            start: s as u32,
        })
        .collect();
    let mut next = cur.clone();
    let mut bm = vec![0.0f64; 1 << c];
    for chunk in llrs.chunks_exact(c) {
        for (label, m) in bm.iter_mut().enumerate() {
            *m = branch_metric(label as u8, chunk);
        }
        for (ns, slot) in next.iter_mut().enumerate() {
            let [(p0, bit), (p1, _)] = trellis.predecessors(ns);
            let (a, b) = (&cur[p0], &cur[p1]);
            let ma = a.metric + bm[trellis.label(p0, bit) as usize];
            let mb = b.metric + bm[trellis.label(p1, bit) as usize];
            let take_a = (ma > mb) | ((ma == mb) & ((a.start, a.word) <= (b.start, b.word)));
            // Index select keeps the hot loop free of data-dependent jumps.
            let p = cur[p0 | (!take_a) as usize];
            *slot = Path {
                metric: if take_a { ma } else { mb },
                word: (p.word << 1) | bit as u64,
                start: p.start,
            };
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let bound = cur.iter().fold(f64::NEG_INFINITY, |b, p| b.max(p.metric));
    (cur, bound)
}

/// Keeps the tail-biting survivors (end state equal to start state), ranked
/// best first, and certifies those scoring at least the prune bound.
fn finish(survivors: Vec<Path>, bound: f64, num_states: usize, k: usize) -> Vec<PathCandidate> {
    let mask = (num_states - 1) as u64;
    let v = num_states.trailing_zeros();
    // The end state is the last v inputs, most recent in the top bit.
    let end_state = |w: u64| (w & mask).reverse_bits() >> (64 - v);
    let mut out: Vec<Path> = survivors
        .into_iter()
        .filter(|p| end_state(p.word) == p.start as u64)
        .collect();
    out.sort_by(rank_order);
    out.into_iter()
        .enumerate()
        .map(|(rank, p)| PathCandidate {
            message: p.word,
            len: k,
            metric: p.metric,
            start_state: p.start as usize,
            end_state: p.start as usize,
            rank,
            certified: p.metric >= bound,
        })
        .collect()
}

/// Adaptive-loop adapter for a tail-biting code: LLRs in, CRC words out.
#[derive(Clone, Debug)]
pub struct TbccListDecoder {
    trellis: Trellis,
    k: usize,
}

impl TbccListDecoder {
    /// Decoder for `k` information bits (message plus CRC) per codeword.
    pub fn new(spec: &ConvCodeSpec, k: usize) -> Result<Self> {
        if k > 64 || k < spec.memory() {
            return Err(Error::InvalidArgument(format!(
                "{k} information bits outside {}..=64",
                spec.memory()
            )));
        }
        Ok(TbccListDecoder {
            trellis: Trellis::build(spec),
            k,
        })
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }
}

impl ListDecoder for TbccListDecoder {
    fn llr_len(&self) -> usize {
        self.k * self.trellis.outputs()
    }

    fn info_len(&self) -> usize {
        self.k
    }

    /// The exact top `list_size` tail-biting codewords; see
    /// [`crate::tb_search`].
    fn decode_list(&self, llrs: &[f64], list_size: usize) -> Result<Vec<Candidate>> {
        Ok(tb_list_decode(llrs, &self.trellis, list_size)?
            .into_iter()
            .map(|c| Candidate {
                word: c.message,
                score: c.metric,
                certified: c.certified,
            })
            .collect())
    }
}
