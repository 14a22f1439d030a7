//! Analytic guarantees and colorability bounds.

pub mod hereditary;
pub mod mu;
pub mod napier;
pub mod recurrence;

pub use hereditary::{
    compose_guarantee, hereditary_certificate, hereditary_check, hereditary_constant,
    pigeonhole_certificate, pinch_points, virtual_color_count, PinchPoint, PinchPointSet,
    PinchRule,
};
pub use mu::{
    minimal_coloring, mu_colorable_certificate, mu_grid, mu_guarantee_certificate,
    mu_lower_bound_holds, mu_sequence, MinimalColoring,
};
pub use napier::{lll_volume_threshold, napier_enclosure, volume_sandwich, VolumeSandwich};
pub use recurrence::{
    corollary_grid, count_certificate, delta_certificate, delta_sequence, epsilon,
    epsilon_certificate, epsilon_sequence, gamma_certificate, gamma_sequence,
    guaranteed_count_lower_bound, RationalBoundSequence, SequenceKind,
};
