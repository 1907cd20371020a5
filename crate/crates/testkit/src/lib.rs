//! Seeded generators and brute-force oracles shared by the test suites.
//!
//! Nothing here calls the solver or the relational operators under test:
//! feasibility is decided by Fourier–Motzkin elimination, relations are
//! compared against set comprehensions, and programs are checked by
//! enumerating every branch combination.

pub mod fm;
pub mod gen;
pub mod laws;
pub mod plp;
pub mod relations;

pub use rand::Rng;
pub use rand_chacha::ChaCha8Rng;

use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
