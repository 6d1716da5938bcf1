//! Hardware parameters of the overlay.

use crate::error::{Error, Result};

/// Dimensions and timing constants of the simulated accelerator.
///
/// Buffer dimensions are in elements: the Weight Buffer is `n_w x p_sys`,
/// the Edge Buffer `n_e x 3`, the Feature Buffer `n_f1 x n_f2`. The DDR
/// model is fixed latency plus fair-shared aggregate bandwidth; it stands in
/// for a full DRAM simulation and is declared in all reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareParams {
    pub n_pe: u32,
    pub p_sys: u32,
    pub n_w: u32,
    pub n_e: u32,
    pub n_f1: u32,
    pub n_f2: u32,
    /// Aggregate DDR bandwidth in bytes per cycle.
    pub ddr_bandwidth: u32,
    /// Fixed DDR latency in cycles.
    pub ddr_latency: u32,
    /// Clock for converting cycles to modeled milliseconds in reports.
    pub freq_hz: u64,
}

impl Default for HardwareParams {
    fn default() -> Self {
        HardwareParams::u250_default()
    }
}

impl HardwareParams {
    /// The reference configuration: 8 PEs with 16x16 compute arrays,
    /// 16384x16 weight buffer, 65536-edge edge buffer, 16384x16 feature
    /// buffer, 77 GB/s at 300 MHz (256 B/cycle), 100-cycle latency.
    pub fn u250_default() -> Self {
        HardwareParams {
            n_pe: 8,
            p_sys: 16,
            n_w: 16384,
            n_e: 65536,
            n_f1: 16384,
            n_f2: 16,
            ddr_bandwidth: 256,
            ddr_latency: 100,
            freq_hz: 300_000_000,
        }
    }

    /// Small configuration useful for exercising multi-tile paths on tiny
    /// graphs in tests.
    pub fn tiny(p_sys: u32, n_pe: u32, n_f1: u32) -> Self {
        HardwareParams {
            n_pe,
            p_sys,
            n_w: 1024,
            n_e: 1024,
            n_f1,
            n_f2: p_sys,
            ddr_bandwidth: 64,
            ddr_latency: 20,
            freq_hz: 300_000_000,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "u250-default" => Ok(HardwareParams::u250_default()),
            other => Err(Error::InvalidModel(format!("unknown hardware preset `{other}`"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_sys.is_power_of_two() || self.p_sys < 2 {
            return Err(Error::InvalidModel(format!(
                "p_sys must be a power of two >= 2, got {}",
                self.p_sys
            )));
        }
        if self.n_pe == 0 || self.n_f1 == 0 || self.n_f2 == 0 || self.n_e == 0 || self.n_w == 0 {
            return Err(Error::InvalidModel("hardware dimensions must be nonzero".into()));
        }
        if self.ddr_bandwidth == 0 {
            return Err(Error::InvalidModel("ddr bandwidth must be nonzero".into()));
        }
        Ok(())
    }

    pub fn cycles_to_ms(&self, cycles: u64) -> f64 {
        cycles as f64 / self.freq_hz as f64 * 1e3
    }
}
