//! Successive-cancellation list decoding in the LLR domain.
//!
//! Each path carries its own f/g intermediate LLRs and partial sums. The
//! path metric is the usual penalty: a decision that disagrees with the sign
//! of its leaf LLR costs `|llr|`. Frozen leaves are forced to zero and pay
//! the same penalty when contradicted. Lower metric is better.

use crate::bits::BitBlock;
use crate::error::{Error, Result};

use super::PolarSpec;

/// One decoded information word with its path penalty.
#[derive(Clone, Debug, PartialEq)]
pub struct SclCandidate {
    pub info: BitBlock,
    pub metric: f64,
}

#[inline]
fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

#[inline]
fn g_combine(a: f64, b: f64, left: u8) -> f64 {
    if left == 1 {
        b - a
    } else {
        b + a
    }
}

#[inline]
fn penalty(llr: f64, u: u8) -> f64 {
    if (u == 0 && llr < 0.0) || (u == 1 && llr > 0.0) {
        llr.abs()
    } else {
        0.0
    }
}

#[derive(Clone)]
struct Path {
    metric: f64,
    word: u64,
    /// Layer `l >= 1` occupies `n - (n >> (l - 1))` .. `+ (n >> l)`.
    alpha: Vec<f64>,
    /// Layer `l >= 0` occupies `2n - (2n >> l)` .. `+ (n >> l)`.
    beta_left: Vec<u8>,
    beta_right: Vec<u8>,
}

struct Layout {
    n: usize,
    m: usize,
}

impl Layout {
    fn alpha_off(&self, layer: usize) -> usize {
        self.n - (self.n >> (layer - 1))
    }

    fn beta_off(&self, layer: usize) -> usize {
        2 * self.n - ((2 * self.n) >> layer)
    }
}

impl Path {
    fn new(n: usize) -> Self {
        Path {
            metric: 0.0,
            word: 0,
            alpha: vec![0.0; n],
            beta_left: vec![0; 2 * n],
            beta_right: vec![0; 2 * n],
        }
    }

    /// Computes the LLRs down to leaf `phi` and returns the leaf LLR.
    fn leaf_llr(&mut self, lay: &Layout, channel: &[f64], phi: usize) -> f64 {
        let start = if phi == 0 {
            1
        } else {
            lay.m - phi.trailing_zeros() as usize
        };
        for layer in start..=lay.m {
            let len = lay.n >> layer;
            let dst = lay.alpha_off(layer);
            let right_child = phi != 0 && layer == start;
            if layer == 1 {
                self.descend(channel, None, dst, len, right_child, lay.beta_off(layer));
            } else {
                let src = lay.alpha_off(layer - 1);
                self.descend(&[], Some(src), dst, len, right_child, lay.beta_off(layer));
            }
        }
        self.alpha[lay.alpha_off(lay.m)]
    }

    fn descend(
        &mut self,
        channel: &[f64],
        src: Option<usize>,
        dst: usize,
        len: usize,
        right: bool,
        boff: usize,
    ) {
        for i in 0..len {
            let (a, b) = match src {
                None => (channel[i], channel[i + len]),
                Some(s) => (self.alpha[s + i], self.alpha[s + i + len]),
            };
            self.alpha[dst + i] = if right {
                g_combine(a, b, self.beta_left[boff + i])
            } else {
                f_minsum(a, b)
            };
        }
    }

    /// Records decision `u` at leaf `phi` and folds completed subtrees into
    /// their parents' partial sums.
    fn decide(&mut self, lay: &Layout, phi: usize, u: u8) {
        let mut layer = lay.m;
        let mut idx = phi;
        let leaf = lay.beta_off(layer);
        if idx & 1 == 0 {
            self.beta_left[leaf] = u;
        } else {
            self.beta_right[leaf] = u;
        }
        while idx & 1 == 1 && layer > 0 {
            let len = lay.n >> layer;
            let s = lay.beta_off(layer);
            let d = lay.beta_off(layer - 1);
            let parent = idx >> 1;
            let into_left = layer == 1 || parent & 1 == 0;
            for i in 0..len {
                let (l, r) = (self.beta_left[s + i], self.beta_right[s + i]);
                let dest = if into_left {
                    &mut self.beta_left
                } else {
                    &mut self.beta_right
                };
                dest[d + i] = l ^ r;
                dest[d + i + len] = r;
            }
            idx = parent;
            layer -= 1;
        }
    }
}

/// List decoding returning packed information words (first information bit
/// most significant) with their penalties, best first.
pub fn scl_decode_words(
    llrs: &[f64],
    spec: &PolarSpec,
    list_size: usize,
) -> Result<Vec<(u64, f64)>> {
    if list_size == 0 || !list_size.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "list size {list_size} is not a power of two >= 1"
        )));
    }
    if llrs.len() != spec.n() {
        return Err(Error::InvalidArgument(format!(
            "{} LLRs for a length-{} polar code",
            llrs.len(),
            spec.n()
        )));
    }
    let n = spec.n();
    let lay = Layout {
        n,
        m: n.trailing_zeros() as usize,
    };
    let mut paths = vec![Path::new(n)];
    let mut cands: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * list_size);

    for phi in 0..n {
        let leaf: Vec<f64> = paths
            .iter_mut()
            .map(|p| p.leaf_llr(&lay, llrs, phi))
            .collect();
        if spec.is_frozen(phi) {
            for (p, &llr) in paths.iter_mut().zip(&leaf) {
                p.metric += penalty(llr, 0);
                p.decide(&lay, phi, 0);
            }
            continue;
        }
        cands.clear();
        for (i, (p, &llr)) in paths.iter().zip(&leaf).enumerate() {
            cands.push((p.metric + penalty(llr, 0), i, 0));
            cands.push((p.metric + penalty(llr, 1), i, 1));
        }
        // Stable: equal metrics keep (path, bit) generation order.
        cands.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        cands.truncate(list_size);

        let mut uses = vec![0usize; paths.len()];
        for &(_, i, _) in &cands {
            uses[i] += 1;
        }
        let mut old: Vec<Option<Path>> = paths.drain(..).map(Some).collect();
        for &(metric, i, u) in &cands {
            let mut p = if uses[i] > 1 {
                uses[i] -= 1;
                old[i].as_ref().expect("path still owned").clone()
            } else {
                old[i].take().expect("path used once")
            };
            p.metric = metric;
            p.word = (p.word << 1) | u as u64;
            p.decide(&lay, phi, u);
            paths.push(p);
        }
    }

    let mut out: Vec<(u64, f64)> = paths.iter().map(|p| (p.word, p.metric)).collect();
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// CRC-agnostic SCL decoding; candidates sorted by nondecreasing penalty.
pub fn scl_decode(llrs: &[f64], spec: &PolarSpec, list_size: usize) -> Result<Vec<SclCandidate>> {
    Ok(scl_decode_words(llrs, spec, list_size)?
        .into_iter()
        .map(|(w, metric)| SclCandidate {
            info: BitBlock::from_word(w, spec.k()),
            metric,
        })
        .collect())
}

/// Plain successive cancellation: [`scl_decode`] with a single path.
pub fn sc_decode(llrs: &[f64], spec: &PolarSpec) -> Result<BitBlock> {
    Ok(scl_decode(llrs, spec, 1)?.remove(0).info)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::ReliabilitySequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_list_sizes() {
        let spec = PolarSpec::nr_512(56).unwrap();
        assert!(scl_decode(&[0.0; 512], &spec, 0).is_err());
        assert!(scl_decode(&[0.0; 512], &spec, 3).is_err());
        assert!(scl_decode(&[0.0; 511], &spec, 1).is_err());
    }

    #[test]
    fn noiseless_roundtrip_at_list_one() {
        let spec = PolarSpec::nr_512(43).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let info = BitBlock::random(&mut rng, 43);
            let llrs: Vec<f64> = spec
                .encode(&info)
                .unwrap()
                .iter()
                .map(|b| if b == 0 { 2.0 } else { -2.0 })
                .collect();
            let out = scl_decode(&llrs, &spec, 1).unwrap();
            assert_eq!(out[0].info, info);
            assert_eq!(out[0].metric, 0.0);
        }
    }

    #[test]
    fn penalty_matches_codeword_disagreement() {
        // With min-sum updates the accumulated penalty of a complete path is
        // the total |llr| over code bits that disagree with the hard decisions.
        let seq = ReliabilitySequence::bhattacharyya(32, 0.5).unwrap();
        let spec = PolarSpec::new(32, 12, &seq).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let llrs: Vec<f64> = (0..32).map(|_| rng.random_range(-4.0..4.0)).collect();
            for cand in scl_decode(&llrs, &spec, 8).unwrap() {
                let cw = spec.encode(&cand.info).unwrap();
                let disagreement: f64 = cw.iter().zip(&llrs).map(|(b, &l)| penalty(l, b)).sum();
                assert!((disagreement - cand.metric).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn metrics_are_sorted() {
        let spec = PolarSpec::nr_512(56).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let llrs: Vec<f64> = (0..512).map(|_| rng.random_range(-2.0..3.0)).collect();
        let out = scl_decode(&llrs, &spec, 16).unwrap();
        assert_eq!(out.len(), 16);
        for w in out.windows(2) {
            assert!(w[0].metric <= w[1].metric);
        }
    }
}
