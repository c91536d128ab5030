//! Digital search trees.
//!
//! Every node stores one key. A new key walks down from the root, turning
//! left on a 0 bit and right on a 1 bit, and is stored at the first empty
//! position. The root consumes no bit, so a key at depth `d` has used
//! exactly its first `d` bits. Keys are never compared with each other.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::pmf::IntPmf;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(domain("bit string", format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Root,
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Root => "root",
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Where a key went (or would go).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertReport<L> {
    pub depth: usize,
    /// The bits consumed on the way down; `path.len() == depth`.
    pub path: BitString,
    pub parent: Option<L>,
    pub side: Side,
}

#[derive(Debug, Clone)]
struct Node<L> {
    label: L,
    children: [Option<usize>; 2],
}

enum Slot {
    Root,
    Child { parent: usize, right: bool },
}

/// A digital search tree with keys identified by labels of type `L`.
#[derive(Debug, Clone)]
pub struct Dst<L = String> {
    nodes: Vec<Node<L>>,
}

impl<L> Default for Dst<L> {
    fn default() -> Self {
        Self { nodes: Vec::new() }
    }
}

impl<L: Clone + fmt::Display> Dst<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            nodes: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn clear(&mut self) {
        self.nodes.clear();
    }

    fn locate<I: Iterator<Item = bool>>(&self, bits: I) -> std::result::Result<(Slot, Vec<bool>), usize> {
        let mut path = Vec::new();
        if self.nodes.is_empty() {
            return Ok((Slot::Root, path));
        }
        let mut bits = bits;
        let mut cur = 0;
        loop {
            let Some(bit) = bits.next() else {
                return Err(path.len());
            };
            path.push(bit);
            match self.nodes[cur].children[bit as usize] {
                Some(next) => cur = next,
                None => return Ok((Slot::Child { parent: cur, right: bit }, path)),
            }
        }
    }

    fn report(&self, slot: &Slot, path: Vec<bool>) -> InsertReport<L> {
        let (parent, side) = match *slot {
            Slot::Root => (None, Side::Root),
            Slot::Child { parent, right } => (
                Some(self.nodes[parent].label.clone()),
                if right { Side::Right } else { Side::Left },
            ),
        };
        InsertReport {
            depth: path.len(),
            path: BitString(path),
            parent,
            side,
        }
    }

    /// Inserts `label`, drawing bits from `bits` only as far as needed. On
    /// failure the tree is left unchanged.
    pub fn insert_with<I: IntoIterator<Item = bool>>(
        &mut self,
        label: L,
        bits: I,
    ) -> Result<InsertReport<L>> {
        let (slot, path) = self
            .locate(bits.into_iter())
            .map_err(|consumed| Error::InsufficientBits {
                index: self.nodes.len(),
                label: label.to_string(),
                consumed,
            })?;
        let report = self.report(&slot, path);
        let id = self.nodes.len();
        if let Slot::Child { parent, right } = slot {
            self.nodes[parent].children[right as usize] = Some(id);
        }
        self.nodes.push(Node {
            label,
            children: [None, None],
        });
        Ok(report)
    }

    pub fn insert(&mut self, label: L, bits: &BitString) -> Result<InsertReport<L>> {
        self.insert_with(label, bits.0.iter().copied())
    }

    /// Where a key with these bits would be stored, without storing it.
    pub fn probe(&self, bits: &BitString) -> Result<InsertReport<L>> {
        self.probe_with(bits.0.iter().copied())
            .map_err(|consumed| Error::InsufficientBits {
                index: self.nodes.len(),
                label: "probe".into(),
                consumed,
            })
    }

    /// Depth of the first free node along `bits`; `Err(consumed)` if the bits
    /// run out first.
    pub fn probe_with<I: IntoIterator<Item = bool>>(
        &self,
        bits: I,
    ) -> std::result::Result<InsertReport<L>, usize> {
        let (slot, path) = self.locate(bits.into_iter())?;
        Ok(self.report(&slot, path))
    }

    /// Every stored key with the bit path leading to its node, in insertion order.
    pub fn node_paths(&self) -> Vec<(L, BitString)> {
        let mut paths = vec![BitString::default(); self.nodes.len()];
        let mut stack = if self.nodes.is_empty() { vec![] } else { vec![0] };
        while let Some(id) = stack.pop() {
            for (bit, child) in self.nodes[id].children.iter().enumerate() {
                if let Some(c) = *child {
                    let mut p = paths[id].0.clone();
                    p.push(bit == 1);
                    paths[c] = BitString(p);
                    stack.push(c);
                }
            }
        }
        self.nodes
            .iter()
            .zip(paths)
            .map(|(n, p)| (n.label.clone(), p))
            .collect()
    }
}

/// Inserts the corpus left to right.
pub fn build(corpus: &[(String, BitString)]) -> Result<(Dst<String>, Vec<InsertReport<String>>)> {
    let mut tree = Dst::with_capacity(corpus.len());
    let reports = corpus
        .iter()
        .map(|(label, bits)| tree.insert(label.clone(), bits))
        .collect::<Result<Vec<_>>>()?;
    Ok((tree, reports))
}

/// First `len` binary digits of `x` in `[0, 1)`.
pub fn bits_from_unit_interval(x: f64, len: usize) -> Result<BitString> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain("unit interval", format!("x must lie in [0, 1), got {x}")));
    }
    if len == 0 {
        return Err(domain("bit length", "len must be >= 1"));
    }
    let mut x = x;
    let bits = (0..len)
        .map(|_| {
            x *= 2.0;
            let bit = x >= 1.0;
            if bit {
                x -= 1.0;
            }
            bit
        })
        .collect();
    Ok(BitString(bits))
}

/// Leading four bits of the fractional parts of sqrt 2, sqrt 3, sqrt 5,
/// sqrt 10, cbrt 2, cbrt 3, 2^(1/4), ln 2, ln 3 and ln 10.
const KNUTH_BITS: [&str; 10] = [
    "0110", "1011", "0011", "0010", "0100", "0111", "0011", "1011", "0001", "0100",
];

/// The ten-key demonstration corpus, labelled `x_1` to `x_10`.
pub fn knuth_corpus() -> Vec<(String, BitString)> {
    KNUTH_BITS
        .iter()
        .enumerate()
        .map(|(i, b)| (format!("x_{}", i + 1), b.parse().expect("constant bits")))
        .collect()
}

/// Parses `label <whitespace> bits` records, one per line. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<(String, BitString)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        let mut fields = line.split_whitespace();
        let (Some(label), Some(bits), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err("expected `label bits`".into()));
        };
        let bits = bits
            .parse::<BitString>()
            .map_err(|e| parse_err(e.to_string()))?;
        out.push((label.to_string(), bits));
    }
    Ok(out)
}

/// Empirical insertion-depth law plus the number of replicates discarded for
/// running past the bit budget.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthSample {
    pub pmf: IntPmf,
    pub overflowed: usize,
}

fn grow_random_tree<R: Rng + ?Sized>(
    tree: &mut Dst<u32>,
    n: usize,
    bit_budget: usize,
    rng: &mut R,
) -> bool {
    tree.clear();
    for key in 0..n as u32 {
        let bits = std::iter::repeat_with(|| rng.random::<bool>()).take(bit_budget);
        if tree.insert_with(key, bits).is_err() {
            return false;
        }
    }
    true
}

fn collect_depths(depths: Vec<i64>, overflowed: usize) -> Result<DepthSample> {
    if depths.is_empty() {
        return Err(domain("replicates", "no replicate finished within the bit budget"));
    }
    Ok(DepthSample {
        pmf: IntPmf::from_samples(depths)?,
        overflowed,
    })
}

/// Depth at which key `n + 1` lands in a tree grown from `n` uniform keys.
/// Key bits are fair coin flips generated on demand.
pub fn simulate_insertion_depth<R: Rng + ?Sized>(
    n: usize,
    replicates: usize,
    bit_budget: usize,
    rng: &mut R,
) -> Result<DepthSample> {
    let mut tree = Dst::with_capacity(n + 1);
    let mut depths = Vec::with_capacity(replicates);
    let mut overflowed = 0;
    for _ in 0..replicates {
        if !grow_random_tree(&mut tree, n, bit_budget, rng) {
            overflowed += 1;
            continue;
        }
        let bits = std::iter::repeat_with(|| rng.random::<bool>()).take(bit_budget);
        match tree.insert_with(n as u32, bits) {
            Ok(r) => depths.push(r.depth as i64),
            Err(_) => overflowed += 1,
        }
    }
    collect_depths(depths, overflowed)
}

/// Depth of the first free node along the fixed path `theta` in a tree
/// grown from `n` uniform keys.
pub fn simulate_probe_depth<R: Rng + ?Sized, T: Fn(usize) -> bool>(
    n: usize,
    replicates: usize,
    bit_budget: usize,
    theta: T,
    rng: &mut R,
) -> Result<DepthSample> {
    let mut tree = Dst::with_capacity(n);
    let mut depths = Vec::with_capacity(replicates);
    let mut overflowed = 0;
    for _ in 0..replicates {
        if !grow_random_tree(&mut tree, n, bit_budget, rng) {
            overflowed += 1;
            continue;
        }
        match tree.probe_with((0..bit_budget).map(&theta)) {
            Ok(r) => depths.push(r.depth as i64),
            Err(_) => overflowed += 1,
        }
    }
    collect_depths(depths, overflowed)
}
