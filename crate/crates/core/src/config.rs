use serde::Serialize;

use crate::contour::ContourConfig;
use crate::family::ParamGrid;
use crate::series::DEFAULT_ORDER;

/// Shared knobs for every decision procedure and verifier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    /// Truncation degree for instantiated members.
    pub trunc: usize,
    /// Parameter grid for the family under test.
    pub grid: ParamGrid,
    /// Parameter grid for kernel families.
    pub kernel_grid: ParamGrid,
    pub contour: ContourConfig,
    /// Grid refinements tried when a sampled check is inconclusive.
    pub max_refinements: u32,
    pub sigma_max: f64,
    /// Points per unit circle when imaging `∂D`.
    pub boundary_samples: usize,
    /// Dilation radii used by the constructive half of `V* = closure (cm V)^T`.
    pub dilation_radii: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            trunc: DEFAULT_ORDER,
            grid: ParamGrid::default(),
            kernel_grid: ParamGrid::new(2, 8),
            contour: ContourConfig::default(),
            max_refinements: 2,
            sigma_max: 4.0,
            boundary_samples: 256,
            dilation_radii: vec![0.9, 0.99, 0.999],
        }
    }
}
