//! Exact bookkeeping of local monodromy and Hodge invariants of local systems
//! on the punctured projective line, under twists by rank-one systems,
//! middle convolution and bilinear constructions.

pub mod angle;
pub mod bilinear;
pub mod conv;
pub mod data;
pub mod dsl;
pub mod error;
pub mod katz;
pub mod render;
pub mod system;
pub mod twist;

pub use angle::{Angle, Rational};
pub use bilinear::{
    block_sym2, block_tensor, block_wedge2, level_angle_profile, solve_degrees_h1vanishing, sym2,
    wedge2, wedge2_reduced, FilteredBlock, LevelAngleProfile,
};
pub use conv::{dim_h1_middle, h1_hodge, mc_hodge, mc_local, H1Result, H1Variant};
pub use data::{BlockKey, HodgeBlockData, JordanData, StoreKind};
pub use error::{Error, Result};
pub use katz::{
    centralizer_dim, choose_allowed_line, katz_reduce, rigidity_index, KatzStep, KatzTrace,
    Reducible,
};
pub use system::{
    dual_monodromy, forget_hodge, make_line, tate_twist, HodgeSystem, MonodromySystem, Pairing,
    RankOneLine,
};
pub use twist::{tensor_line, tensor_line_monodromy};
