//! Eisenstein and shifted-Eisenstein irreducibility for integer polynomials.
//!
//! * [`poly`]: dense integer polynomials, height, length, Taylor shifts.
//! * [`algebra`]: resultants, discriminants, the Mahler and shift-scan bounds.
//! * [`primes`]: sieving, factorization with a completeness flag, roots mod p.
//! * [`eisenstein`]: the decision procedure and its verifiable certificates.
//! * [`density`]: the constants rho_n, tau_n, gamma_n and P_n.
//! * [`census`]: exact enumeration and seeded Monte Carlo experiments.

pub mod algebra;
pub mod census;
pub mod density;
pub mod eisenstein;
pub mod error;
pub mod poly;
pub mod primes;
pub mod serde_big;

pub use algebra::{discriminant, max_shift_bound, mahler_bound, Discriminant};
pub use eisenstein::{
    eisenstein_primes, is_eisenstein, naive_shift_scan, shifted_eisenstein, verify_certificate,
    ShiftCertificate, ShiftedDecision,
};
pub use error::{Error, Result};
pub use poly::IntPoly;
pub use primes::FactorBudget;
