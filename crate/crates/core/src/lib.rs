//! Exact computations for support data on finite models and for matrix
//! factorizations of hypersurfaces.
//!
//! - [`spectral_space`]: finite T0 spaces as posets, closed and irreducible
//!   sets, poset enumeration.
//! - [`support_model`]: finite models with a support, the classifying
//!   correspondence, the spectrum of a model, transport and quotients.
//! - [`tensor_model`]: tensor products on models, prime ideals and the
//!   Balmer spectrum.
//! - [`polyalg`]: polynomials over `QQ` and `GF(p)`, Gröbner bases of
//!   ideals and submodules, radicals, elimination, certificates.
//! - [`mf`]: matrix factorizations, stable Hom modules and stable
//!   endomorphism rings.
//! - [`cli`] and [`suite`]: the `tricat` binary and its check battery.
//!
//! ```
//! use tricat::spectral_space::SpecSpace;
//! use tricat::support_model::SupportModel;
//!
//! let fan = SpecSpace::from_covers("fan", &["g", "m1", "m2"], &[(0, 1), (0, 2)]).unwrap();
//! let model = SupportModel::canonical(&fan);
//! assert!(model.is_classifying().holds());
//! assert!(model.verify_reconstruction().unwrap().passes());
//! ```

pub mod bitset;
pub mod cli;
pub mod lattice;
pub mod mf;
pub mod polyalg;
pub mod spectral_space;
pub mod suite;
pub mod support_model;
pub mod tensor_model;
pub mod text;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/support-data.md")]
    mod support_data {}
    #[doc = include_str!("../../../book/src/tensor.md")]
    mod tensor {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/matrix-factorizations.md")]
    mod matrix_factorizations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
