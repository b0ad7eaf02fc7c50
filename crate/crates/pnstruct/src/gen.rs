//! Seeded generators: block-structured workflow nets and small random nets.
//!
//! Both are pure functions of their parameters. Randomness comes from
//! SplitMix64, so outputs are identical on every platform.

use thiserror::Error;

use crate::marking::Marking;
use crate::net::{validate_net, NetError, PetriNet, RawNet};

pub const MAX_WF_SIZE: usize = 500;
pub const MAX_RANDOM_SIZE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("size {size} outside {min}..={max}")]
    SizeOutOfRange { size: usize, min: usize, max: usize },
    #[error("all block weights are zero")]
    ZeroWeights,
    #[error(transparent)]
    Net(#[from] NetError),
}

/// SplitMix64 (Steele, Lea and Flood).
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` by multiply-shift; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    /// Activities for workflow nets, total nodes for random nets.
    pub size: usize,
    /// Relative weights of sequence, exclusive choice, parallel and loop blocks.
    pub weights: [u32; 4],
}

impl GenParams {
    pub fn new(seed: u64, size: usize) -> Self {
        GenParams { seed, size, weights: [3, 2, 2, 1] }
    }
}

enum Block {
    Task,
    Seq(Box<Block>, Box<Block>),
    Xor(Box<Block>, Box<Block>),
    And(Box<Block>, Box<Block>),
    Loop(Box<Block>, Box<Block>),
}

fn tree(rng: &mut SplitMix64, n: usize, weights: &[u32; 4]) -> Block {
    if n == 1 {
        return Block::Task;
    }
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    let mut roll = rng.below(total);
    let mut op = 0;
    while roll >= weights[op] as u64 {
        roll -= weights[op] as u64;
        op += 1;
    }
    let k = 1 + rng.below(n as u64 - 1) as usize;
    let a = Box::new(tree(rng, k, weights));
    let b = Box::new(tree(rng, n - k, weights));
    match op {
        0 => Block::Seq(a, b),
        1 => Block::Xor(a, b),
        2 => Block::And(a, b),
        _ => Block::Loop(a, b),
    }
}

#[derive(Default)]
struct Builder {
    raw: RawNet,
}

impl Builder {
    fn place(&mut self) -> String {
        let id = format!("p{}", self.raw.places.len() - 1);
        self.raw.places.push((id.clone(), 0));
        id
    }

    fn trans(&mut self) -> String {
        let id = format!("t{}", self.raw.transitions.len() + 1);
        self.raw.transitions.push(id.clone());
        id
    }

    fn arc(&mut self, a: &str, b: &str) {
        self.raw.arcs.push((a.to_string(), b.to_string()));
    }

    /// Every transition consuming from `entry` has `{entry}` as its pre-set,
    /// which keeps the result free-choice.
    fn block(&mut self, b: &Block, entry: &str, exit: &str) {
        match b {
            Block::Task => {
                let t = self.trans();
                self.arc(entry, &t);
                self.arc(&t, exit);
            }
            Block::Seq(x, y) => {
                let mid = self.place();
                self.block(x, entry, &mid);
                self.block(y, &mid, exit);
            }
            Block::Xor(x, y) => {
                self.block(x, entry, exit);
                self.block(y, entry, exit);
            }
            Block::And(x, y) => {
                let split = self.trans();
                let (a1, a2, b1, b2) = (self.place(), self.place(), self.place(), self.place());
                self.arc(entry, &split);
                self.arc(&split, &a1);
                self.arc(&split, &a2);
                self.block(x, &a1, &b1);
                self.block(y, &a2, &b2);
                let join = self.trans();
                self.arc(&b1, &join);
                self.arc(&b2, &join);
                self.arc(&join, exit);
            }
            Block::Loop(body, redo) => {
                let enter = self.trans();
                let (head, tail) = (self.place(), self.place());
                self.arc(entry, &enter);
                self.arc(&enter, &head);
                self.block(body, &head, &tail);
                self.block(redo, &tail, &head);
                let leave = self.trans();
                self.arc(&tail, &leave);
                self.arc(&leave, exit);
            }
        }
    }
}

/// A sound free-choice workflow net with source `i` and sink `o`, marked
/// with one token on `i`.
pub fn gen_block_wf(params: &GenParams) -> Result<(PetriNet, Marking), GenError> {
    if params.size == 0 || params.size > MAX_WF_SIZE {
        return Err(GenError::SizeOutOfRange { size: params.size, min: 1, max: MAX_WF_SIZE });
    }
    if params.weights.iter().all(|&w| w == 0) {
        return Err(GenError::ZeroWeights);
    }
    let mut rng = SplitMix64::new(params.seed);
    let shape = tree(&mut rng, params.size, &params.weights);
    let mut b = Builder::default();
    b.raw.name = format!("wf_{}_{}", params.seed, params.size);
    b.raw.places.push(("i".into(), 1));
    b.raw.places.push(("o".into(), 0));
    b.block(&shape, "i", "o");
    Ok(validate_net(&b.raw)?)
}

/// A connected net with `size` nodes, random arcs and 0, 1 or 2 tokens per
/// place. Disconnected draws are discarded and redrawn.
pub fn gen_small_random(params: &GenParams) -> Result<(PetriNet, Marking), GenError> {
    if params.size < 2 || params.size > MAX_RANDOM_SIZE {
        return Err(GenError::SizeOutOfRange { size: params.size, min: 2, max: MAX_RANDOM_SIZE });
    }
    let mut rng = SplitMix64::new(params.seed);
    loop {
        let np = 1 + rng.below(params.size as u64 - 1) as usize;
        let nt = params.size - np;
        let places: Vec<String> = (1..=np).map(|i| format!("p{i}")).collect();
        let transitions: Vec<String> = (1..=nt).map(|i| format!("t{i}")).collect();
        let mut arcs = Vec::new();
        for p in &places {
            for t in &transitions {
                if rng.chance(3, 10) {
                    arcs.push((p.clone(), t.clone()));
                }
                if rng.chance(3, 10) {
                    arcs.push((t.clone(), p.clone()));
                }
            }
        }
        let tokens = |r: u64| match r {
            0..=49 => 0,
            50..=84 => 1,
            _ => 2,
        };
        let raw = RawNet {
            name: format!("random_{}_{}", params.seed, params.size),
            places: places.into_iter().map(|p| (p, tokens(rng.below(100)))).collect(),
            transitions,
            arcs,
        };
        match validate_net(&raw) {
            Ok(out) => return Ok(out),
            Err(NetError::Disconnected(..)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}
