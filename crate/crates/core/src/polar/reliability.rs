use std::path::Path;

use crate::error::{Error, Result};

/// Environment variable naming a directory that overrides the bundled data
/// assets.
pub const DATA_DIR_ENV: &str = "LISTFEC_DATA_DIR";

/// File name of the 512-entry 5G reliability sequence.
pub const NR_512_FILE: &str = "nr_polar_reliability_512.txt";

const NR_512_BUNDLED: &str = include_str!("../../data/nr_polar_reliability_512.txt");

/// Sub-channel indices ordered from least to most reliable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReliabilitySequence(Vec<usize>);

impl ReliabilitySequence {
    /// Accepts a permutation of `0..len`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::MalformedInput(format!(
                    "reliability sequence is not a permutation of 0..{n} (index {i})"
                )));
            }
            seen[i] = true;
        }
        Ok(ReliabilitySequence(order))
    }

    /// Parses one index per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let order = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(n, l)| {
                l.parse::<usize>()
                    .map_err(|e| Error::MalformedInput(format!("reliability entry {n} `{l}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    /// The 38.212 universal sequence restricted to indices below 512. Read
    /// from `$LISTFEC_DATA_DIR` when set, otherwise the bundled copy.
    pub fn nr_512() -> Result<Self> {
        let seq = match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Self::load(&Path::new(&dir).join(NR_512_FILE))?,
            None => Self::parse(NR_512_BUNDLED)?,
        };
        if seq.len() != 512 {
            return Err(Error::MalformedInput(format!(
                "{NR_512_FILE} has {} entries, expected 512",
                seq.len()
            )));
        }
        Ok(seq)
    }

    /// Bhattacharyya-parameter construction for a BEC with erasure
    /// probability `z0`. Used for toy lengths where no standard table exists.
    pub fn bhattacharyya(n: usize, z0: f64) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "length {n} is not a power of two"
            )));
        }
        let m = n.trailing_zeros();
        let z: Vec<f64> = (0..n)
            .map(|i| {
                (0..m).rev().fold(z0, |z, bit| {
                    if (i >> bit) & 1 == 1 {
                        z * z
                    } else {
                        2.0 * z - z * z
                    }
                })
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| z[b].partial_cmp(&z[a]).unwrap().then(a.cmp(&b)));
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn least_to_most(&self) -> &[usize] {
        &self.0
    }
}
