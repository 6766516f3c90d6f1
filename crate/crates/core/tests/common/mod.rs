//! Straight-line reference implementations used as test oracles. None of
//! them call into the library's coding routines.

#![allow(dead_code)]

/// `message * x^m mod poly` by schoolbook long division on a bit vector.
pub fn crc_long_division(message: &[u8], poly: u64) -> Vec<u8> {
    let m = 63 - poly.leading_zeros() as usize;
    let g: Vec<u8> = (0..=m).rev().map(|i| ((poly >> i) & 1) as u8).collect();
    let mut buf = message.to_vec();
    buf.extend(std::iter::repeat_n(0, m));
    for i in 0..message.len() {
        if buf[i] == 1 {
            for (j, &gj) in g.iter().enumerate() {
                buf[i + j] ^= gj;
            }
        }
    }
    buf[message.len()..].to_vec()
}

pub fn crc_append(message: &[u8], poly: u64) -> Vec<u8> {
    let mut w = message.to_vec();
    w.extend(crc_long_division(message, poly));
    w
}

/// Tail-biting encoding with an explicit delay line. Octal generator bit `v`
/// taps the current input, bit `v - i` taps the input `i` steps back. The
/// delay line is preloaded with the last `v` message bits.
pub fn tb_encode(generators: &[u32], v: usize, msg: &[u8]) -> Vec<u8> {
    let k = msg.len();
    let mut line: Vec<u8> = (0..v).map(|i| msg[k - 1 - i]).collect();
    let mut out = Vec::with_capacity(k * generators.len());
    for &b in msg {
        let mut reg = vec![b];
        reg.extend(&line);
        for &g in generators {
            let mut acc = 0u8;
            for (i, &r) in reg.iter().enumerate() {
                acc ^= ((g >> (v - i)) & 1) as u8 & r;
            }
            out.push(acc);
        }
        line.insert(0, b);
        line.pop();
    }
    out
}

/// Starting state of a tail-biting message: the last `v` inputs, most recent
/// in the top bit.
pub fn tb_start_state(v: usize, msg: &[u8]) -> usize {
    let k = msg.len();
    (0..v).fold(0, |s, i| s | ((msg[k - 1 - i] as usize) << (v - 1 - i)))
}

pub fn bits_of(word: u64, len: usize) -> Vec<u8> {
    (0..len).rev().map(|i| ((word >> i) & 1) as u8).collect()
}

pub fn word_of(bits: &[u8]) -> u64 {
    bits.iter().fold(0, |w, &b| (w << 1) | b as u64)
}

/// Correlation `sum (1 - 2c) llr`, summed within each stage of `c` outputs
/// first and then across stages, the association the decoder uses, so
/// equal-valued metrics compare equal.
pub fn staged_correlation(code: &[u8], llrs: &[f64], c: usize) -> f64 {
    code.chunks(c)
        .zip(llrs.chunks(c))
        .fold(0.0, |acc, (cb, lb)| {
            let mut stage = 0.0;
            for (&b, &l) in cb.iter().zip(lb) {
                if b == 0 {
                    stage += l;
                } else {
                    stage -= l;
                }
            }
            acc + stage
        })
}

/// Every tail-biting codeword ranked by metric, then start state, then
/// message: `(message, metric, start_state)`.
pub fn tb_codebook_ranking(
    generators: &[u32],
    v: usize,
    k: usize,
    llrs: &[f64],
) -> Vec<(u64, f64, usize)> {
    let c = generators.len();
    let mut all: Vec<(u64, f64, usize)> = (0..1u64 << k)
        .map(|w| {
            let msg = bits_of(w, k);
            let cw = tb_encode(generators, v, &msg);
            (w, staged_correlation(&cw, llrs, c), tb_start_state(v, &msg))
        })
        .collect();
    all.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then(a.2.cmp(&b.2))
            .then(a.0.cmp(&b.0))
    });
    all
}

/// Weight distribution of message -> CRC -> tail-biting code, indexed by
/// weight.
pub fn concatenated_spectrum(
    generators: &[u32],
    v: usize,
    crc_poly: Option<u64>,
    k: usize,
) -> Vec<u64> {
    let m = crc_poly.map_or(0, |p| 63 - p.leading_zeros() as usize);
    let n = (k + m) * generators.len();
    let mut counts = vec![0u64; n + 1];
    for w in 0..1u64 << k {
        let msg = bits_of(w, k);
        let word = match crc_poly {
            Some(p) => crc_append(&msg, p),
            None => msg,
        };
        let weight = tb_encode(generators, v, &word)
            .iter()
            .filter(|&&b| b == 1)
            .count();
        counts[weight] += 1;
    }
    counts
}

/// DSO winner: lexicographically smallest spectrum from weight 1, smallest
/// polynomial among ties.
pub fn dso_oracle(generators: &[u32], v: usize, m: usize, k: usize) -> u64 {
    (0..1u64 << (m - 1))
        .map(|i| (1u64 << m) | (2 * i + 1))
        .min_by_key(|&p| {
            (
                concatenated_spectrum(generators, v, Some(p), k)[1..].to_vec(),
                p,
            )
        })
        .unwrap()
}

/// `x = u * F^{(x)m}` from the explicit Kronecker generator matrix.
pub fn polar_encode_matrix(u: &[u8]) -> Vec<u8> {
    let n = u.len();
    let mut g = vec![vec![1u8]];
    while g.len() < n {
        let s = g.len();
        let mut next = vec![vec![0u8; 2 * s]; 2 * s];
        for i in 0..s {
            for j in 0..s {
                next[i][j] = g[i][j];
                next[s + i][j] = g[i][j];
                next[s + i][s + j] = g[i][j];
            }
        }
        g = next;
    }
    (0..n)
        .map(|j| (0..n).fold(0, |acc, i| acc ^ (u[i] & g[i][j])))
        .collect()
}

fn min_sum(a: f64, b: f64) -> f64 {
    a.signum() * b.signum() * a.abs().min(b.abs())
}

/// Recursive successive-cancellation decoding with min-sum check nodes.
/// Returns the decided `u` vector (frozen positions included as zeros).
pub fn sc_recursive(llrs: &[f64], frozen: &[bool]) -> Vec<u8> {
    fn rec(l: &[f64], frozen: &[bool], u: &mut Vec<u8>) -> Vec<u8> {
        if l.len() == 1 {
            let b = if frozen[0] { 0 } else { (l[0] < 0.0) as u8 };
            u.push(b);
            return vec![b];
        }
        let h = l.len() / 2;
        let (la, lb) = l.split_at(h);
        let left: Vec<f64> = la.iter().zip(lb).map(|(&a, &b)| min_sum(a, b)).collect();
        let c1 = rec(&left, &frozen[..h], u);
        let right: Vec<f64> = la
            .iter()
            .zip(lb)
            .zip(&c1)
            .map(|((&a, &b), &c)| if c == 0 { b + a } else { b - a })
            .collect();
        let c2 = rec(&right, &frozen[h..], u);
        let mut x: Vec<u8> = c1.iter().zip(&c2).map(|(a, b)| a ^ b).collect();
        x.extend(c2);
        x
    }
    let mut u = Vec::with_capacity(llrs.len());
    rec(llrs, frozen, &mut u);
    u
}

/// Every information word with its ML cost `sum |llr_j| [x_j != hard_j]`,
/// sorted by cost.
pub fn polar_ml_costs(llrs: &[f64], info_positions: &[usize]) -> Vec<(u64, f64)> {
    let n = llrs.len();
    let k = info_positions.len();
    let mut out: Vec<(u64, f64)> = (0..1u64 << k)
        .map(|w| {
            let mut u = vec![0u8; n];
            for (b, &p) in bits_of(w, k).iter().zip(info_positions) {
                u[p] = *b;
            }
            let x = polar_encode_matrix(&u);
            let cost = x
                .iter()
                .zip(llrs)
                .filter(|(&xj, &l)| xj != (l < 0.0) as u8)
                .map(|(_, l)| l.abs())
                .sum();
            (w, cost)
        })
        .collect();
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    out
}

/// Upper edge of a 95% interval.
pub fn hi(p: f64, ci: f64) -> f64 {
    p + ci
}

/// Lower edge of a 95% interval.
pub fn lo(p: f64, ci: f64) -> f64 {
    p - ci
}
