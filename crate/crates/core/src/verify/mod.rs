//! Certification of factorizations G = HK and the supporting checks.

mod certificate;
mod coverage;
mod fingerprint;
mod properties;
mod table;

pub use certificate::{
    certify_product, certify_vector_stabilizer, FactorizationCertificate, Method, Params, Verdict,
};
pub use coverage::{
    abelian_subgroups, check_r_coverage, coverage_cases, hk_member, product_set, CoverageCase,
    ProductMembership, RCoverageReport, COVERAGE_LIMIT,
};
pub use fingerprint::{fingerprint, Fingerprint, FINGERPRINT_ORDER_LIMIT};
pub use properties::{property_conjugation, property_subgroup_product, SubgroupProductOutcome};
pub use table::{row_support, run_table_row, RowParams, RowSupport, RowVariant, ROW_COUNT};

/// BigUint as a decimal string.
pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

pub(crate) mod decimal_opt {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(D::Error::custom))
            .transpose()
    }
}

pub(crate) mod decimal_vec {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(D::Error::custom))
            .collect()
    }
}
