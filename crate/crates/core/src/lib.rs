//! Indoor millimeter-wave and sub-terahertz propagation: how building
//! materials reflect, scatter, transmit and depolarize radio waves, and how
//! directional indoor path-loss sweeps reduce to close-in models.
//!
//! | module | contents |
//! |---|---|
//! | [`reflection`] | Fresnel Γ⊥, permittivity estimation, linear |Γ⊥|(θ) fit |
//! | [`scattering`] | specular + dual-lobe directive scattering, smoothness test |
//! | [`partition`] | partition loss, XPD, depolarization margin, power budget |
//! | [`pathloss`] | Friis FSPL, close-in model evaluation and fitting, NLOS-best reduction |
//! | [`datasets`] | embedded 28/73/142 GHz reference tables, CSV ingestion |
//!
//! ```
//! use indoor_channel::reflection::{reflection_loss_db, IncidentAngle, Permittivity};
//!
//! let loss = reflection_loss_db(IncidentAngle::from_degrees(0.0)?, Permittivity::new(6.4)?)?;
//! assert!((loss - 7.26).abs() < 0.01);
//! # Ok::<(), indoor_channel::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datasets;
pub mod error;
pub mod partition;
pub mod pathloss;
pub mod quadrature;
pub mod reflection;
pub mod scattering;

pub use error::{Error, Result};
