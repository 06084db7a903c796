//! JSON seed files.
//!
//! ```json
//! { "m": 2, "n": 2, "lambda": [[0,1],[-1,0]], "btilde": [[0,1],[-3,0]],
//!   "d": [3,1], "h": { "1": ["1","h[1,1]","h[1,1]","1"] } }
//! ```
//!
//! `d` and `h` are optional; missing entries take the defaults of
//! [`ExchangeData::default_degrees`] and [`ExchangeData::default_family`].

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeff::QCoefficient;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::seed::{CompatiblePair, ExchangeData, QuantumSeed};
use crate::text::parse_coefficient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub m: usize,
    pub n: usize,
    pub lambda: IntMatrix,
    pub btilde: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<BTreeMap<String, Vec<String>>>,
}

impl SeedFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SeedFile(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::SeedFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("seed files always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::SeedFile(format!("{}: {e}", path.display())))
    }

    /// Validates the file and builds the initial seed it describes.
    pub fn to_seed(&self) -> Result<QuantumSeed> {
        if self.lambda.rows() != self.m || self.btilde.rows() != self.m {
            return Err(Error::SeedFile(format!(
                "m = {} but lambda has {} rows and btilde has {} rows",
                self.m,
                self.lambda.rows(),
                self.btilde.rows()
            )));
        }
        if self.btilde.cols() != self.n {
            return Err(Error::SeedFile(format!(
                "n = {} but btilde has {} columns",
                self.n,
                self.btilde.cols()
            )));
        }
        let pair = CompatiblePair::new(self.lambda.clone(), self.btilde.clone())?;
        let d = match &self.d {
            Some(d) => d.clone(),
            None => ExchangeData::default_degrees(&self.btilde),
        };
        if d.len() != self.n {
            return Err(Error::SeedFile(format!(
                "d has {} entries, expected {}",
                d.len(),
                self.n
            )));
        }
        let given = self.h.clone().unwrap_or_default();
        if let Some(key) = given
            .keys()
            .find(|k| !matches!(k.parse::<usize>(), Ok(x) if (1..=self.n).contains(&x)))
        {
            return Err(Error::SeedFile(format!(
                "h key {key:?} is not a direction in 1..={}",
                self.n
            )));
        }
        let mut h = Vec::with_capacity(self.n);
        for (k, &dk) in d.iter().enumerate() {
            let family = match given.get(&(k + 1).to_string()) {
                Some(texts) => texts
                    .iter()
                    .enumerate()
                    .map(|(r, t)| {
                        parse_coefficient(t)
                            .map_err(|e| Error::SeedFile(format!("h {}[{r}]: {e}", k + 1)))
                    })
                    .collect::<Result<Vec<QCoefficient>>>()?,
                None if dk > 0 => ExchangeData::default_family(k, dk),
                None => Vec::new(),
            };
            h.push(family);
        }
        let exchange = ExchangeData::new(d, h, &self.btilde)?;
        QuantumSeed::new(pair, exchange)
    }

    /// The current data of `seed` as a file describing an initial seed.
    pub fn from_seed(seed: &QuantumSeed) -> Self {
        let n = seed.n();
        let h = (0..n)
            .map(|k| {
                let family = seed
                    .exchange()
                    .family(k)
                    .iter()
                    .map(|c| c.to_string())
                    .collect();
                ((k + 1).to_string(), family)
            })
            .collect();
        SeedFile {
            m: seed.m(),
            n,
            lambda: seed.pair().lambda().clone(),
            btilde: seed.pair().btilde().clone(),
            d: Some(seed.exchange().degrees().to_vec()),
            h: Some(h),
        }
    }
}

pub fn load_seed(path: impl AsRef<Path>) -> Result<QuantumSeed> {
    SeedFile::load(path)?.to_seed()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures::{frozen, g2};

    const G2: &str = r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]],
        "d":[3,1],"h":{"1":["1","h[1,1]","h[1,1]","1"],"2":["1","1"]}}"#;

    #[test]
    fn explicit_file_matches_defaults() {
        let seed = SeedFile::from_json(G2).unwrap().to_seed().unwrap();
        assert_eq!(seed, g2());
        assert_eq!(seed.exchange(), g2().exchange());
        let bare = r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]]}"#;
        assert_eq!(
            SeedFile::from_json(bare)
                .unwrap()
                .to_seed()
                .unwrap()
                .exchange(),
            g2().exchange()
        );
    }

    #[test]
    fn round_trip() {
        for seed in [
            g2(),
            frozen(),
            g2().apply_word(&[0, 1, 0]).unwrap().reroot(),
        ] {
            let file = SeedFile::from_seed(&seed);
            let back = SeedFile::from_json(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let rebuilt = back.to_seed().unwrap();
            assert_eq!(rebuilt, seed);
            assert_eq!(rebuilt.exchange(), seed.exchange());
        }
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]],"d":[2,1]}"#,
            r#"{"m":3,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]]}"#,
            r#"{"m":2,"n":2,"lambda":[[0,1],[1,0]],"btilde":[[0,1],[-3,0]]}"#,
            r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]],"h":{"3":["1","1"]}}"#,
            r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]],"h":{"1":["1","q^(1/3)","q^(1/3)","1"]}}"#,
            r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]]}"#,
            r#"{"m":2,"n":2,"lambda":[[0,1],[-1,0]],"btilde":[[0,1],[-3,0]],"extra":1}"#,
        ];
        for text in cases {
            assert!(
                SeedFile::from_json(text).and_then(|f| f.to_seed()).is_err(),
                "{text}"
            );
        }
    }
}
