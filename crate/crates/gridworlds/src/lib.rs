//! Sequential grid-world environments: Boulder Push and Level-Based
//! Foraging, both built around miscoordination penalties.

mod boulder;
mod foraging;
mod grid;

pub use boulder::BoulderPush;
pub use foraging::LevelForaging;
