//! Rate-1/c feedforward convolutional codes in tail-biting form.
//!
//! Generators are written in octal with the most significant digit holding
//! the lowest-delay taps: `575` is `101 111 101`, tap on the current input
//! first and tap on the oldest register cell last.
//!
//! A state holds the previous `v` inputs with the most recent one in the
//! most significant position. On input `b` the register contents are
//! `(b << v) | state` and the next state is `(b << (v - 1)) | (state >> 1)`.

use std::fmt;

use crate::bits::BitBlock;
use crate::error::{Error, Result};

/// Registry name of the rate-1/5, 256-state code.
pub const TBCC_RATE_FIFTH_ID: &str = "tbcc-575-623-727-561-753";

#[derive(Clone, PartialEq, Eq)]
pub struct ConvCodeSpec {
    generators: Vec<u32>,
    memory: usize,
}

impl ConvCodeSpec {
    /// `generators` hold the tap masks as integers (parse octal strings with
    /// [`ConvCodeSpec::from_octal`]).
    pub fn new(generators: Vec<u32>, memory: usize) -> Result<Self> {
        if memory == 0 || memory > 16 {
            return Err(Error::InvalidSpec(format!(
                "memory {memory} outside 1..=16"
            )));
        }
        if generators.is_empty() || generators.len() > 8 {
            return Err(Error::InvalidSpec(format!(
                "{} generators, expected 1..=8",
                generators.len()
            )));
        }
        let width = memory + 1;
        if let Some(g) = generators.iter().find(|&&g| g >> width != 0) {
            return Err(Error::InvalidSpec(format!(
                "generator {g:o} is wider than v+1 = {width} bits"
            )));
        }
        let full = |g: u32| (g >> memory) & 1 == 1 && g & 1 == 1;
        if !generators.iter().any(|&g| full(g)) {
            return Err(Error::InvalidSpec(
                "no generator taps both the current input and the oldest cell".into(),
            ));
        }
        Ok(ConvCodeSpec { generators, memory })
    }

    pub fn from_octal(generators: &[&str], memory: usize) -> Result<Self> {
        let taps = generators
            .iter()
            .map(|s| {
                u32::from_str_radix(s, 8)
                    .map_err(|e| Error::InvalidSpec(format!("generator `{s}` is not octal: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(taps, memory)
    }

    /// The 8-memory, rate-1/5 code with generators (575, 623, 727, 561, 753).
    pub fn rate_fifth() -> Self {
        Self::from_octal(&["575", "623", "727", "561", "753"], 8).expect("valid code")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            TBCC_RATE_FIFTH_ID => Ok(Self::rate_fifth()),
            _ => Err(Error::UnknownId(name.to_string())),
        }
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Output bits per input bit.
    pub fn outputs(&self) -> usize {
        self.generators.len()
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory
    }

    /// Tail-biting encoding. The register starts from the last `v` input bits
    /// so that the final state equals the initial one. Output bits of one
    /// stage are emitted consecutively, generator order.
    pub fn encode(&self, input: &BitBlock) -> Result<BitBlock> {
        let k = input.len();
        if k < self.memory {
            return Err(Error::InputTooShort {
                needed: self.memory,
                got: k,
            });
        }
        let mut state = self.tail_state(input);
        let mut out = Vec::with_capacity(k * self.outputs());
        for b in input.iter() {
            let reg = ((b as u32) << self.memory) | state as u32;
            out.extend(
                self.generators
                    .iter()
                    .map(|&g| ((g & reg).count_ones() & 1) as u8),
            );
            state = self.next_state(state, b);
        }
        Ok(BitBlock::from(out))
    }

    /// State whose register holds the last `v` bits of `input`.
    pub fn tail_state(&self, input: &BitBlock) -> usize {
        let k = input.len();
        (0..self.memory).fold(0usize, |s, i| {
            s | ((input[k - 1 - i] as usize) << (self.memory - 1 - i))
        })
    }

    fn next_state(&self, state: usize, bit: u8) -> usize {
        ((bit as usize) << (self.memory - 1)) | (state >> 1)
    }
}

impl fmt::Debug for ConvCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|g| format!("{g:o}")).collect();
        write!(f, "ConvCodeSpec(v={}, g=({}))", self.memory, g.join(","))
    }
}

/// State graph of a [`ConvCodeSpec`]. Edge `(state, bit)` is stored at index
/// `2 * state + bit`; output labels carry generator `j`'s bit at position `j`.
#[derive(Clone, Debug)]
pub struct Trellis {
    memory: usize,
    outputs: usize,
    next: Vec<u32>,
    labels: Vec<u8>,
}

impl Trellis {
    pub fn build(spec: &ConvCodeSpec) -> Self {
        let n = spec.num_states();
        let mut next = Vec::with_capacity(2 * n);
        let mut labels = Vec::with_capacity(2 * n);
        for s in 0..n {
            for b in 0..2u8 {
                let reg = ((b as u32) << spec.memory) | s as u32;
                let label = spec
                    .generators
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (j, &g)| {
                        acc | ((((g & reg).count_ones() & 1) as u8) << j)
                    });
                next.push(spec.next_state(s, b) as u32);
                labels.push(label);
            }
        }
        Trellis {
            memory: spec.memory,
            outputs: spec.outputs(),
            next,
            labels,
        }
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn next_state(&self, state: usize, bit: u8) -> usize {
        self.next[2 * state + bit as usize] as usize
    }

    pub fn label(&self, state: usize, bit: u8) -> u8 {
        self.labels[2 * state + bit as usize]
    }

    /// The two `(previous_state, input_bit)` edges entering `state`.
    pub fn predecessors(&self, state: usize) -> [(usize, u8); 2] {
        let mask = self.num_states() - 1;
        let bit = (state >> (self.memory - 1)) as u8;
        let p0 = (state << 1) & mask;
        [(p0, bit), (p0 | 1, bit)]
    }

    /// Encodes a packed `k`-bit message starting from `start` state, returning
    /// the per-stage labels and the final state.
    pub fn walk(&self, word: u64, k: usize, start: usize) -> (Vec<u8>, usize) {
        let mut s = start;
        let mut labels = Vec::with_capacity(k);
        for i in (0..k).rev() {
            let b = ((word >> i) & 1) as u8;
            labels.push(self.label(s, b));
            s = self.next_state(s, b);
        }
        (labels, s)
    }
}
