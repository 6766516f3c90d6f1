//! Repetition rate matching for any base code.
//!
//! A map gives a repeat count per base-code bit. Transmission goes in
//! passes: pass `r` sends, in index order, every bit whose count exceeds
//! `r`. The 5G polar subset repetition (first 352 of 512 bits twice) is the
//! map `[2; 352] ++ [1; 160]` under this ordering.

use std::path::Path;

use crate::bits::BitBlock;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionMap {
    counts: Vec<u32>,
    /// Base index of each transmitted position.
    order: Vec<usize>,
}

impl RepetitionMap {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::config("repetition_map", "empty map"));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::config(
                "repetition_map",
                format!("bit {i} has repeat count 0"),
            ));
        }
        let max = *counts.iter().max().unwrap();
        let order = (0..max)
            .flat_map(|pass| {
                counts
                    .iter()
                    .enumerate()
                    .filter(move |(_, &c)| c > pass)
                    .map(|(i, _)| i)
            })
            .collect();
        Ok(RepetitionMap { counts, order })
    }

    /// Every bit sent once.
    pub fn identity(n: usize) -> Self {
        Self::new(vec![1; n]).expect("nonempty")
    }

    /// Every bit sent `times` times.
    pub fn uniform(n: usize, times: u32) -> Result<Self> {
        Self::new(vec![times; n])
    }

    /// The first `prefix` bits twice, the rest once.
    pub fn prefix(n: usize, prefix: usize) -> Result<Self> {
        if prefix > n {
            return Err(Error::config(
                "repetition_map",
                "prefix longer than codeword",
            ));
        }
        Self::new((0..n).map(|i| if i < prefix { 2 } else { 1 }).collect())
    }

    /// Spreads `n_transmit` transmissions as evenly as possible over `n`
    /// bits; the last bits take the extra copy. For 215 -> 864 this is 211
    /// bits four times and 4 bits five times.
    pub fn spread(n: usize, n_transmit: usize) -> Result<Self> {
        if n == 0 || n_transmit < n {
            return Err(Error::config(
                "repetition_map",
                format!("cannot spread {n_transmit} transmissions over {n} bits"),
            ));
        }
        let base = (n_transmit / n) as u32;
        let extra = n_transmit % n;
        Self::new(
            (0..n)
                .map(|i| if i >= n - extra { base + 1 } else { base })
                .collect(),
        )
    }

    /// Parses one integer per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let counts = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(i, l)| {
                l.parse::<u32>().map_err(|e| {
                    Error::config("repetition_map", format!("line {}: `{l}`: {e}", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(counts)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.counts.len() * 2);
        for c in &self.counts {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }

    pub fn base_len(&self) -> usize {
        self.counts.len()
    }

    pub fn transmit_len(&self) -> usize {
        self.order.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn is_identity(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }

    pub fn expand(&self, codeword: &BitBlock) -> Result<BitBlock> {
        if codeword.len() != self.base_len() {
            return Err(Error::InvalidArgument(format!(
                "{}-bit codeword for a {}-bit repetition map",
                codeword.len(),
                self.base_len()
            )));
        }
        Ok(self.order.iter().map(|&i| codeword[i]).collect())
    }

    /// Adds the LLRs of all copies of each base bit, in transmission order.
    pub fn combine(&self, llrs: &[f64]) -> Result<Vec<f64>> {
        if llrs.len() != self.transmit_len() {
            return Err(Error::InvalidArgument(format!(
                "{} LLRs for a {}-position transmission",
                llrs.len(),
                self.transmit_len()
            )));
        }
        let n = self.base_len();
        let mut out = llrs[..n].to_vec();
        for (&i, &l) in self.order[n..].iter().zip(&llrs[n..]) {
            out[i] += l;
        }
        Ok(out)
    }
}
