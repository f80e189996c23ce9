//! File formats and rendering behind the `pmtn` command.

pub mod files;
pub mod render;
