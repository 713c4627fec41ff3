//! Exact multivariate polynomials and Gröbner bases over `ℚ` or `𝔽_p`.
//!
//! Polynomial rings stand in for the power-series rings of local algebra:
//! every ideal considered here is generated by polynomials, and the
//! set-level statements checked (vanishing loci, radical equality,
//! isomorphisms of quotients by ideals supported at the origin) only see
//! those generators.

pub mod cert;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod parse;
pub mod poly;

use thiserror::Error;

pub use cert::{check_ring_iso, parse_cert, parse_ring_file, CertReport, QuotientRing, RingFile, RingMapCert};
pub use field::{Field, Fp, Q};
pub use groebner::ModuleGb;
pub use ideal::{jacobian_ideal, GroebnerBasis, Ideal};
pub use parse::{parse_poly, parse_poly_list, Ring};
pub use poly::{Mono, MonoOrder, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("characteristic {p} divides an exponent of variable {var}")]
    Characteristic { var: usize, p: u64 },
    #[error(transparent)]
    Parse(#[from] crate::text::ParseError),
}
