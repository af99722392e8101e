//! Command-line front end for `axy-core`.

pub mod commands;
pub mod output;
pub mod verify;

use std::process::ExitCode;

use axy_core::Error;

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_OVERFLOW: u8 = 3;

pub fn exit_code_for(err: &Error) -> ExitCode {
    if err.is_overflow() {
        ExitCode::from(EXIT_OVERFLOW)
    } else {
        ExitCode::from(EXIT_USAGE)
    }
}
