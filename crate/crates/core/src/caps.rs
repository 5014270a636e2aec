use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size limits checked before expensive computations start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    /// Cap on `m^2 * n * d` for symbolic trace coordinates.
    pub max_symbolic_size: u128,
    /// Cap on `n^d` for full-tensor computations.
    pub max_tensor_entries: u128,
    /// Cap on the word length of the binary trace parametrization.
    pub max_trace_param_length: usize,
    /// Cap on the number of generator rows in one rank computation.
    pub max_rows: u128,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_symbolic_size: 256,
            max_tensor_entries: 1 << 16,
            max_trace_param_length: 24,
            max_rows: 200_000,
        }
    }
}

impl ResourceCaps {
    pub fn unlimited() -> Self {
        ResourceCaps {
            max_symbolic_size: u128::MAX,
            max_tensor_entries: u128::MAX,
            max_trace_param_length: usize::MAX,
            max_rows: u128::MAX,
        }
    }

    pub(crate) fn check(what: &'static str, size: u128, cap: u128) -> Result<()> {
        if size > cap {
            return Err(Error::ResourceCap { what, size, cap });
        }
        Ok(())
    }
}
