//! Measure spaces, measurable sets, step functions and weights.

mod set;
mod space;
mod step;
mod weight;

pub use set::{Hypograph, IndexSet, IntervalUnion, MeasurableSet, RadialBall, Sections};
pub use space::{Grid, MeasureSpace, Point, SectionLayout, SetOp};
pub(crate) use space::section_radius;
pub use step::{canonical_step, StepFunction};
pub(crate) use step::increments;
pub use weight::{PointWeight, Profile, SectionProfile, Weight};
