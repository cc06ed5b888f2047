//! Seeded instance generation, instance files and the Type I–IV showcase.

mod config;
mod document;
mod generate;
mod hexfloat;
mod showcase;

pub use config::{
    ConstraintRecipe, ConvexKind, FeasibilityMode, GeneratorConfig, TransformRecipe, ANCHOR_MARGIN,
    DEFAULT_SUBPROBLEM_BUDGET,
};
pub use document::{
    load, load_file, save, save_file, BoxDoc, ConstraintBody, ConstraintDoc, InstanceDocument, ObjectiveDoc, PeakDoc,
    Real, RealMatrix, RealVec, SCHEMA_VERSION,
};
pub use generate::{generate, instance_id};
pub use hexfloat::{from_hex, to_hex};
pub use showcase::{showcase, showcase_instance, SHOWCASE_NAMES, SHOWCASE_TYPES};
