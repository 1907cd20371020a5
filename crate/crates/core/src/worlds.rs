//! Worlds (truth assignments) and sets of worlds.

use crate::error::{Error, Result};
use std::fmt;

/// A truth assignment over an alphabet, stored as a bit-vector: bit `i`
/// holds the value of the `i`-th proposition in alphabet order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub u64);

impl World {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn get(self, prop: usize) -> bool {
        (self.0 >> prop) & 1 == 1
    }

    pub fn with(self, prop: usize, value: bool) -> World {
        if value {
            World(self.0 | (1 << prop))
        } else {
            World(self.0 & !(1 << prop))
        }
    }

    /// Bit-string key in alphabet order, e.g. `10` for `p=1, q=0`.
    pub fn key(self, width: usize) -> String {
        (0..width).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn from_key(key: &str, width: usize) -> Result<World> {
        if key.len() != width || !key.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::WorldOutOfRange {
                world: key.to_string(),
                props: width,
            });
        }
        Ok(key.bytes().enumerate().fold(World(0), |w, (i, b)| w.with(i, b == b'1')))
    }
}

/// Dense bitset over the `2^n` worlds of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    len: usize,
    blocks: Vec<u64>,
}

impl WorldSet {
    pub fn empty(len: usize) -> Self {
        WorldSet {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::empty(len);
        for b in &mut set.blocks {
            *b = u64::MAX;
        }
        set.trim();
        set
    }

    pub fn from_worlds(len: usize, worlds: impl IntoIterator<Item = World>) -> Result<Self> {
        let mut set = Self::empty(len);
        for w in worlds {
            if w.index() >= len {
                return Err(Error::WorldOutOfRange {
                    world: w.0.to_string(),
                    props: len.trailing_zeros() as usize,
                });
            }
            set.insert(w);
        }
        Ok(set)
    }

    /// Number of worlds in the ambient sample space.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, w: World) {
        let i = w.index();
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, w: World) -> bool {
        let i = w.index();
        i < self.len && (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            len: self.len,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            len: self.len,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn complement(&self) -> WorldSet {
        let mut set = WorldSet {
            len: self.len,
            blocks: self.blocks.iter().map(|b| !b).collect(),
        };
        set.trim();
        set
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.len as u64).map(World).filter(move |w| self.contains(*w))
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
