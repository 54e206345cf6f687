//! Equilibrium-SAT public-key cryptosystem.
//!
//! The private key is a truth assignment over `n` Boolean variables. The
//! public key is a CNF formula built so that every clause contains exactly
//! `k` literals that are TRUE under the private assignment (an *equilibrium*
//! formula). Encryption publishes only the literal-occurrence counts (the
//! *spectrum*) of a random `e`-clause extraction; because every equilibrium
//! clause contributes exactly `k` to the spectrum's inner product with the
//! private assignment, the receiver can read a planted deviation — a swapped
//! count pair, or a biased mix of clause groups — that is invisible without
//! the assignment.
//!
//! # Quick start
//!
//! ```
//! use eqsat::{cipher, keygen, rng, Mode, Params};
//!
//! let params = Params::new(Mode::M3, 4, 512, 20, 4, 768, 4)?;
//! let mut rand = rng::seeded_rng(7); // use rng::secure_rng() in production
//! let (pk, sk) = keygen::generate_keypair(&params, &mut rand)?;
//!
//! let message = b"equilibrium".to_vec();
//! let ct = cipher::encrypt_message(&pk, &params, &message, &mut rand)?;
//! assert_eq!(cipher::decrypt_message(&ct, &sk)?, message);
//! # Ok::<(), eqsat::Error>(())
//! ```
//!
//! # Modules
//!
//! * [`model`] — literals, clauses, keys, and the literal spectrum.
//! * [`keygen`] — pool-based key generation and keypair verification.
//! * [`cipher`] — methods 2 (1 bit), 3 (`b` bits), and 4 (divided keys).
//! * [`codec`] — bit-exact binary formats and DIMACS export.
//! * [`analysis`] — brute-force oracle, wrong-key experiments, benchmarks.
//! * [`rng`] — ChaCha20-based randomness constructors.

pub mod analysis;
mod bits;
pub mod cipher;
pub mod codec;
pub mod combin;
pub mod error;
pub mod keygen;
pub mod model;
pub mod params;
pub mod rng;

pub use cipher::{Ciphertext, CiphertextBlock, EncryptTrace};
pub use error::{Error, Result};
pub use keygen::VerifyReport;
pub use model::{Clause, Literal, LiteralSpectrum, PrivateKey, PublicKey};
pub use params::{Mode, Params};
