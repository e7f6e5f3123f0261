//! Blow-ups, projective bundles and products with projective space.

pub mod blowup;
pub mod bundle;

pub use blowup::{blowup_transfer_check, BlowupBasis, BlowupData, BlowupElement, BlowupRing};
pub use bundle::{
    adjoin_bundle, bundle_model, curve_model, product_model, product_with_projective_space, projective_bundle,
    projective_model, projective_space,
};
