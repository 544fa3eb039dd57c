use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Series resistor-inductor load. Output: the inductor current `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrLoad {
    #[serde(rename = "R")]
    pub resistance: f64,
    #[serde(rename = "L")]
    pub inductance: f64,
}

/// Series inductor feeding a parallel resistor-capacitor. Output: `v_C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrcLoad {
    #[serde(rename = "L")]
    pub inductance: f64,
    #[serde(rename = "R")]
    pub resistance: f64,
    #[serde(rename = "C")]
    pub capacitance: f64,
}

/// Inductor, shunt capacitor, then series `L1`-`R` load. Output: `i_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LclrLoad {
    #[serde(rename = "L")]
    pub inductance: f64,
    #[serde(rename = "C")]
    pub capacitance: f64,
    #[serde(rename = "L1")]
    pub load_inductance: f64,
    #[serde(rename = "R")]
    pub resistance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LoadCircuit {
    Lr(LrLoad),
    Lrc(LrcLoad),
    Lclr(LclrLoad),
}

fn check(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

impl LrLoad {
    pub fn new(resistance: f64, inductance: f64) -> Result<Self> {
        let load = Self { resistance, inductance };
        load.validate()?;
        Ok(load)
    }

    pub fn validate(&self) -> Result<()> {
        check("R", self.resistance)?;
        check("L", self.inductance)
    }
}

impl LrcLoad {
    pub fn new(inductance: f64, resistance: f64, capacitance: f64) -> Result<Self> {
        let load = Self { inductance, resistance, capacitance };
        load.validate()?;
        Ok(load)
    }

    pub fn validate(&self) -> Result<()> {
        check("L", self.inductance)?;
        check("R", self.resistance)?;
        check("C", self.capacitance)
    }
}

impl LclrLoad {
    pub fn new(inductance: f64, capacitance: f64, load_inductance: f64, resistance: f64) -> Result<Self> {
        let load = Self { inductance, capacitance, load_inductance, resistance };
        load.validate()?;
        Ok(load)
    }

    pub fn validate(&self) -> Result<()> {
        check("L", self.inductance)?;
        check("C", self.capacitance)?;
        check("L1", self.load_inductance)?;
        check("R", self.resistance)
    }
}

impl LoadCircuit {
    pub fn validate(&self) -> Result<()> {
        match self {
            LoadCircuit::Lr(load) => load.validate(),
            LoadCircuit::Lrc(load) => load.validate(),
            LoadCircuit::Lclr(load) => load.validate(),
        }
    }

    pub fn resistance(&self) -> f64 {
        match self {
            LoadCircuit::Lr(load) => load.resistance,
            LoadCircuit::Lrc(load) => load.resistance,
            LoadCircuit::Lclr(load) => load.resistance,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LoadCircuit::Lr(_) => "LR",
            LoadCircuit::Lrc(_) => "L-RC",
            LoadCircuit::Lclr(_) => "L-C-LR",
        }
    }
}

impl From<LrLoad> for LoadCircuit {
    fn from(load: LrLoad) -> Self {
        LoadCircuit::Lr(load)
    }
}

impl From<LrcLoad> for LoadCircuit {
    fn from(load: LrcLoad) -> Self {
        LoadCircuit::Lrc(load)
    }
}

impl From<LclrLoad> for LoadCircuit {
    fn from(load: LclrLoad) -> Self {
        LoadCircuit::Lclr(load)
    }
}

/// Instantaneous circuit state. Only the variables the circuit has are set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StateVector {
    /// Source-side inductor current.
    pub i: Option<f64>,
    /// Load current through `L1` and `R`.
    pub i_1: Option<f64>,
    /// Capacitor voltage.
    pub v_c: Option<f64>,
}
