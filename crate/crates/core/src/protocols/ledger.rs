use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource totals of one protocol run over `n` copies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResourceLedger {
    pub n: usize,
    pub ebits_consumed: f64,
    pub ebits_gained: f64,
    pub cobits_consumed: f64,
    pub cobits_gained: f64,
}

impl ResourceLedger {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    fn check(amount: f64) -> Result<()> {
        if !(amount >= 0.0) || !amount.is_finite() {
            return Err(Error::Invariant(format!("ledger amount {amount} must be finite and >= 0")));
        }
        Ok(())
    }

    pub fn consume_ebits(&mut self, amount: f64) -> Result<()> {
        Self::check(amount)?;
        self.ebits_consumed += amount;
        Ok(())
    }

    pub fn gain_ebits(&mut self, amount: f64) -> Result<()> {
        Self::check(amount)?;
        self.ebits_gained += amount;
        Ok(())
    }

    pub fn consume_cobits(&mut self, amount: f64) -> Result<()> {
        Self::check(amount)?;
        self.cobits_consumed += amount;
        Ok(())
    }

    pub fn gain_cobits(&mut self, amount: f64) -> Result<()> {
        Self::check(amount)?;
        self.cobits_gained += amount;
        Ok(())
    }

    /// Net ebits per copy.
    pub fn e_rate(&self) -> f64 {
        (self.ebits_consumed - self.ebits_gained) / self.n as f64
    }

    /// Net cobits per copy.
    pub fn c_rate(&self) -> f64 {
        (self.cobits_consumed - self.cobits_gained) / self.n as f64
    }
}
