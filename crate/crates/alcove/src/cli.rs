//! Placeholder.

/// Entry point for the command-line tool.
pub fn run() {}
