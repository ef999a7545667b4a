pub mod commands;
pub mod config;
pub mod error;
pub mod oracle;
pub mod output;
pub mod verify;
