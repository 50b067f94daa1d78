use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BivariateSignal, MeasurementScheme, MeasurementSet};
use crate::{Error, Result, C64};

/// On-disk signal: `{"N": .., "x": [[re1, im1, re2, im2], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: Vec<[f64; 4]>,
}

impl From<BivariateSignal> for SignalFile {
    fn from(s: BivariateSignal) -> Self {
        SignalFile {
            n: s.len(),
            x: (0..s.len())
                .map(|k| {
                    let [a, b] = s.sample(k);
                    [a.re, a.im, b.re, b.im]
                })
                .collect(),
        }
    }
}

impl TryFrom<SignalFile> for BivariateSignal {
    type Error = Error;

    fn try_from(f: SignalFile) -> Result<Self> {
        if f.x.len() != f.n {
            return Err(Error::InvalidInput(format!(
                "signal file declares N = {} but holds {} samples",
                f.n,
                f.x.len()
            )));
        }
        BivariateSignal::new(
            f.x.iter().map(|r| C64::new(r[0], r[1])).collect(),
            f.x.iter().map(|r| C64::new(r[2], r[3])).collect(),
        )
    }
}

impl BivariateSignal {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// On-disk measurements with their scheme; `y` is `M` rows of `P` values and
/// each projection is `[[re, im], [re, im]]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementFile {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "P")]
    pub p: usize,
    pub projections: Vec<[[f64; 2]; 2]>,
    pub y: Vec<Vec<f64>>,
    #[serde(default)]
    pub sigma2: f64,
}

impl MeasurementFile {
    pub fn from_parts(y: &MeasurementSet, scheme: &MeasurementScheme, n: Option<usize>) -> Self {
        MeasurementFile {
            n,
            m: y.m(),
            p: y.p(),
            projections: scheme
                .projections()
                .iter()
                .map(|b| [[b[0].re, b[0].im], [b[1].re, b[1].im]])
                .collect(),
            y: (0..y.m()).map(|k| y.row(k).to_vec()).collect(),
            sigma2: y.sigma2,
        }
    }

    pub fn into_parts(self) -> Result<(MeasurementSet, MeasurementScheme)> {
        if self.projections.len() != self.p || self.y.len() != self.m {
            return Err(Error::InvalidInput("measurement file dimensions disagree".into()));
        }
        if self.y.iter().any(|r| r.len() != self.p) {
            return Err(Error::InvalidInput("ragged measurement rows".into()));
        }
        let scheme = MeasurementScheme::new(
            self.m,
            self.projections
                .iter()
                .map(|b| [C64::new(b[0][0], b[0][1]), C64::new(b[1][0], b[1][1])])
                .collect(),
        )?;
        let y = MeasurementSet::new(self.m, self.p, self.y.concat(), self.sigma2)?;
        Ok((y, scheme))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

impl MeasurementSet {
    /// CSV with header `m,p,value`, one row per measurement.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,p,value\n");
        for m in 0..self.m() {
            for (p, v) in self.row(m).iter().enumerate() {
                s.push_str(&format!("{m},{p},{v:e}\n"));
            }
        }
        s
    }
}
