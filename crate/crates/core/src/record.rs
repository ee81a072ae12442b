//! Flat, serializable form of a [`Representation`] for machine output.
//!
//! Integers are decimal strings so that no consumer truncates them to a
//! 64-bit float.

use serde::{Deserialize, Serialize};

use crate::mersenne::PIndex;
use crate::repr::{Provenance, Representation, SignClass};
use crate::search::Mode;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub n: u32,
    /// Search mode; absent for identities, tables and two-cube results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub terms: Vec<String>,
    pub g: String,
    pub sign_class: SignClass,
    pub provenance: Provenance,
    /// False when the producing run skipped some x after a factoring timeout.
    pub complete: bool,
}

impl OutputRecord {
    pub fn from_rep(rep: &Representation, mode: Option<Mode>, complete: bool) -> Self {
        OutputRecord {
            n: rep.n().get(),
            mode,
            terms: rep.terms().iter().map(|t| t.to_string()).collect(),
            g: rep.g().to_string(),
            sign_class: rep.sign_class(),
            provenance: rep.provenance().clone(),
            complete,
        }
    }

    /// Parses and re-verifies the record; the gcd and sign class must agree
    /// with the terms.
    pub fn to_rep(&self) -> Result<Representation> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                t.parse()
                    .map_err(|e| Error::ContractViolation(format!("term {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let rep = Representation::new(PIndex::new(self.n)?, terms, self.provenance.clone())?;
        if rep.g().to_string() != self.g || rep.sign_class() != self.sign_class {
            return Err(Error::ContractViolation(format!(
                "record for n = {} has inconsistent g or sign class",
                self.n
            )));
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{four_cube_rep, three_cube_identity};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn json_shape() {
        let rep = Representation::new(
            PIndex::new(3).unwrap(),
            vec![0.into(), 1.into(), 3.into()],
            Provenance::Search,
        )
        .unwrap();
        let rec = OutputRecord::from_rep(&rep, Some(Mode::Nonneg), true);
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"n":3,"mode":"nonneg","terms":["0","1","3"],"g":"1","sign_class":"all-nonneg","provenance":"search","complete":true}"#
        );
        let back: OutputRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.to_rep().unwrap(), rep);
    }

    #[test]
    fn tampered_records_are_rejected() {
        let rep = four_cube_rep(PIndex::new(3).unwrap()).unwrap();
        let mut rec = OutputRecord::from_rep(&rep, None, true);
        rec.g = "2".into();
        assert!(rec.to_rep().is_err());
        let mut rec = OutputRecord::from_rep(&rep, None, true);
        rec.terms[0] = "37".into();
        assert!(rec.to_rep().is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 2u32..400) {
            let n = PIndex::new(n).unwrap();
            let mut reps = three_cube_identity(n).unwrap();
            reps.push(four_cube_rep(n).unwrap());
            for rep in reps {
                let rec = OutputRecord::from_rep(&rep, None, true);
                let back: OutputRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
                prop_assert_eq!(&back, &rec);
                let parsed = back.to_rep().unwrap();
                prop_assert_eq!(parsed.terms(), rep.terms());
                prop_assert!(parsed.terms().iter().all(|t| t.to_string().parse::<BigInt>().unwrap() == *t));
            }
        }
    }
}
