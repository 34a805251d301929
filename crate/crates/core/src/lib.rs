//! Increasing labelings of finite posets, the pair poset whose order ideals
//! encode them, promotion, and the toggle group acting on order ideals.

pub mod bits;
pub mod error;
pub mod fixtures;
pub mod gamma;
pub mod io;
pub mod iso;
pub mod labelings;
pub mod poset;
pub mod promotion;
pub mod toggles;

pub use bits::ElemSet;
pub use error::{Error, Result};
pub use gamma::{build_gamma, build_gamma_q, build_gamma_weak, GammaPoset};
pub use labelings::{induced_restriction, is_consistent, is_weakly_consistent, Labeling, LabelingSpace, RestrictionFunction, Strictness};
pub use poset::{OrderIdeal, Poset, RankFunction};
pub use toggles::{OrbitReport, ToggleOrder, ToggleWord};
