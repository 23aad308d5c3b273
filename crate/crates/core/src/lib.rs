pub mod hyperbolic;
pub mod fuchsian;
pub mod bowen_series;
pub mod mating_schema;
pub mod welding;
pub mod correspondence_model;
