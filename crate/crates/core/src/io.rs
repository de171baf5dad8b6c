//! File formats: spec JSON, raw truth-table dumps, family files, datasets
//! and model files.
//!
//! - Spec JSON: `{"n", "combiner": "and"|"or", "terms": [{"weights": [...],
//!   "threshold": ...}]}`. Only LTF terms have an interchange form.
//! - Truth-table dump: 8-byte header (magic `HSTT`, little-endian `u32 n`)
//!   followed by `⌈2^n/8⌉` bytes, bit `j` of byte `b` holding the table value
//!   at index `8b + j`.
//! - Family file: a spec plus the generator metadata needed to reproduce it.
//! - Dataset CSV: `bits,label` rows. Model file: serialized polynomial.

use std::io::{Read, Write};
use std::path::Path;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::boolfn::{Combiner, CompositeSpec, LinearThresholdFunction, Term, TruthTable};
use crate::constructions::LowerBoundFamily;
use crate::error::Error;
use crate::learner::LabeledSample;
use crate::rat::{rat_display, Rat};
use crate::{boolfn::HypercubePoint, Result};

const TABLE_MAGIC: &[u8; 4] = b"HSTT";

/// JSON document for an AND/OR of halfspaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub n: u32,
    pub combiner: Combiner,
    pub terms: Vec<LinearThresholdFunction>,
}

impl SpecFile {
    pub fn from_spec(spec: &CompositeSpec) -> Result<Self> {
        let terms = spec
            .terms()
            .iter()
            .map(|t| t.as_ltf().cloned().ok_or(Error::UnsupportedTerm))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpecFile {
            n: spec.n(),
            combiner: spec.combiner(),
            terms,
        })
    }

    pub fn into_spec(self) -> Result<CompositeSpec> {
        for t in &self.terms {
            if t.n() != self.n {
                return Err(Error::BadFormat(format!(
                    "term has {} weights but n={}",
                    t.n(),
                    self.n
                )));
            }
        }
        CompositeSpec::new(
            self.n,
            self.combiner,
            self.terms.into_iter().map(Term::Ltf).collect(),
        )
    }
}

/// Serialize a spec to its JSON interchange form.
pub fn spec_to_json(spec: &CompositeSpec) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SpecFile::from_spec(spec)?)?)
}

/// Parse the JSON interchange form.
pub fn spec_from_json(text: &str) -> Result<CompositeSpec> {
    let file: SpecFile = serde_json::from_str(text)?;
    file.into_spec()
}

pub fn load_spec(path: &Path) -> Result<CompositeSpec> {
    spec_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_spec(spec: &CompositeSpec, path: &Path) -> Result<()> {
    std::fs::write(path, spec_to_json(spec)?)?;
    Ok(())
}

/// Write the raw bit dump with the `HSTT` header.
pub fn write_table(table: &TruthTable, w: &mut impl Write) -> Result<()> {
    w.write_all(TABLE_MAGIC)?;
    w.write_all(&table.n().to_le_bytes())?;
    let nbytes = ((1u64 << table.n()) as usize).div_ceil(8);
    let mut bytes = vec![0u8; nbytes];
    for (bi, byte) in bytes.iter_mut().enumerate() {
        for j in 0..8 {
            let idx = bi * 8 + j;
            if idx < (1usize << table.n()) && table.get(idx as u32) {
                *byte |= 1 << j;
            }
        }
    }
    w.write_all(&bytes)?;
    Ok(())
}

/// Read a raw bit dump.
pub fn read_table(r: &mut impl Read) -> Result<TruthTable> {
    let mut header = [0u8; 8];
    r.read_exact(&mut header)?;
    if &header[0..4] != TABLE_MAGIC {
        return Err(Error::BadFormat("missing HSTT magic".into()));
    }
    let n = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if n < 1 || n > crate::boolfn::MAX_TABLE_DIM {
        return Err(Error::BadFormat(format!("table dimension {n} out of range")));
    }
    let nbytes = ((1u64 << n) as usize).div_ceil(8);
    let mut bytes = vec![0u8; nbytes];
    r.read_exact(&mut bytes)?;
    Ok(TruthTable::from_fn(n, |bits| {
        bytes[(bits >> 3) as usize] >> (bits & 7) & 1 == 1
    }))
}

/// Generator metadata stored alongside a family's spec.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyMetadata {
    pub seed: u64,
    pub k: u32,
    pub m: u32,
    pub base_theta: i64,
    /// Requested mass `1/k` as `num/den`.
    pub requested_eps: String,
    /// Achieved base mean as `num/den`.
    pub base_mean: String,
    pub clamped: bool,
}

/// A family file: the union spec plus its generator metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub spec: SpecFile,
    pub metadata: FamilyMetadata,
}

impl FamilyFile {
    pub fn from_family(family: &LowerBoundFamily) -> Result<Self> {
        Ok(FamilyFile {
            spec: SpecFile::from_spec(&family.union())?,
            metadata: FamilyMetadata {
                seed: family.seed,
                k: family.k,
                m: family.m,
                base_theta: family.base_theta,
                requested_eps: rat_display(&family.requested_eps),
                base_mean: rat_display(&family.base_mean),
                clamped: family.clamped,
            },
        })
    }
}

/// Serialize a family with metadata.
pub fn family_to_json(family: &LowerBoundFamily) -> Result<String> {
    Ok(serde_json::to_string_pretty(&FamilyFile::from_family(family)?)?)
}

/// Parse `num/den` (or a bare integer) into a rational.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let parse_int = |s: &str| -> Result<BigInt> {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::BadFormat(format!("bad rational component {s:?}")))
    };
    match text.split_once('/') {
        Some((a, b)) => {
            let den = parse_int(b)?;
            if den == BigInt::from(0) {
                return Err(Error::BadFormat("zero denominator".into()));
            }
            Ok(Rat::new(parse_int(a)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(text)?)),
    }
}

/// Write a dataset as `bits,label` CSV rows.
pub fn write_dataset(samples: &[LabeledSample], w: &mut impl Write) -> Result<()> {
    writeln!(w, "x,label")?;
    for s in samples {
        writeln!(w, "{},{}", s.x.bits(), s.label as u8)?;
    }
    Ok(())
}

/// Read a `bits,label` dataset for dimension `n`.
pub fn read_dataset(text: &str, n: u32) -> Result<Vec<LabeledSample>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 && line.trim() == "x,label" {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (xs, ls) = line
            .split_once(',')
            .ok_or_else(|| Error::BadFormat(format!("line {}: expected bits,label", lineno + 1)))?;
        let bits: u32 = xs
            .trim()
            .parse()
            .map_err(|_| Error::BadFormat(format!("line {}: bad bits", lineno + 1)))?;
        let label = match ls.trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::BadFormat(format!(
                    "line {}: bad label {other:?}",
                    lineno + 1
                )))
            }
        };
        out.push(LabeledSample {
            x: HypercubePoint::try_new(n, bits)?,
            label,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lower_bound_family;
    use crate::exec::Exec;

    #[test]
    fn spec_json_roundtrip() {
        let f1 = LinearThresholdFunction::new(vec![1, -2, 3], 0);
        let f2 = LinearThresholdFunction::new(vec![2, 2, -1], -1);
        let spec = CompositeSpec::intersection(3, vec![f1, f2]).unwrap();
        let json = spec_to_json(&spec).unwrap();
        assert!(json.contains("\"combiner\": \"and\""));
        let back = spec_from_json(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn spec_json_rejects_bad_dimensions() {
        let json = r#"{"n": 3, "combiner": "or", "terms": [{"weights": [1, 2], "threshold": 0}]}"#;
        assert!(spec_from_json(json).is_err());
    }

    #[test]
    fn table_dump_roundtrip() {
        for n in [1u32, 3, 6, 9] {
            let t = TruthTable::from_fn(n, |b| b.wrapping_mul(0x9e3779b9) & 0x8000_0000 != 0);
            let mut buf = Vec::new();
            write_table(&t, &mut buf).unwrap();
            assert_eq!(&buf[0..4], b"HSTT");
            assert_eq!(buf.len(), 8 + ((1usize << n).div_ceil(8)));
            let back = read_table(&mut buf.as_slice()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn family_file_carries_metadata() {
        let fam = lower_bound_family(8, 16, 5).unwrap();
        let json = family_to_json(&fam).unwrap();
        let parsed: FamilyFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.metadata.k, 16);
        assert_eq!(parsed.metadata.m, fam.m);
        assert_eq!(
            parse_rational(&parsed.metadata.requested_eps).unwrap(),
            fam.requested_eps
        );
        let spec = parsed.spec.into_spec().unwrap();
        assert_eq!(
            spec.truth_table(Exec::Sequential).unwrap(),
            fam.union().truth_table(Exec::Sequential).unwrap()
        );
    }

    #[test]
    fn dataset_roundtrip() {
        let samples = vec![
            LabeledSample {
                x: HypercubePoint::new(4, 0b1010),
                label: true,
            },
            LabeledSample {
                x: HypercubePoint::new(4, 0b0001),
                label: false,
            },
        ];
        let mut buf = Vec::new();
        write_dataset(&samples, &mut buf).unwrap();
        let back = read_dataset(std::str::from_utf8(&buf).unwrap(), 4).unwrap();
        assert_eq!(back, samples);
    }
}
