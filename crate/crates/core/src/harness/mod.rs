//! Fixtures, seeded instance generators, verification campaigns and the JSON file format.

pub mod campaign;
pub mod fixtures;
pub mod generate;
pub mod io;

pub use campaign::{run_campaign, CampaignConfig, Report, Scenario, TrialSummary, Violation};
pub use fixtures::{fixture, Fixture};
pub use generate::{gen_pair, gen_pencil, PencilKind};
