//! Process exit codes: 0 success, 2 usage, 3 input format or I/O, 4 numerical failure.

use std::fmt;

use ratiosim::Error;

pub const USAGE: u8 = 2;
pub const INPUT: u8 = 3;
pub const NUMERICAL: u8 = 4;

/// An invalid flag value that clap's parser cannot catch on its own.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return USAGE;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Domain(_) | Error::Numerical(_) => NUMERICAL,
                Error::Invalid(_) => USAGE,
                Error::Empty(_) | Error::Parse { .. } | Error::Csv(_) => INPUT,
            };
        }
        if cause.is::<std::io::Error>() {
            return INPUT;
        }
    }
    1
}
