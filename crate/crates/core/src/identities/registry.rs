use std::collections::HashMap;
use std::sync::OnceLock;

use super::{binomial, chu, generalized, integral, operator, IdentityDef};
use crate::error::{QError, QResult};

const ANCHORS: &str = include_str!("anchors.tsv");

fn anchor_table() -> HashMap<&'static str, &'static str> {
    ANCHORS
        .lines()
        .filter(|l| !l.trim().is_empty())
        .filter_map(|l| l.split_once('\t'))
        .map(|(id, text)| (id.trim(), text.trim()))
        .collect()
}

/// Every registered identity, in a fixed order.
pub fn register_all() -> &'static [IdentityDef] {
    static DEFS: OnceLock<Vec<IdentityDef>> = OnceLock::new();
    DEFS.get_or_init(|| {
        let table = anchor_table();
        let anchor = |id: &str| -> &'static str {
            table
                .get(id)
                .copied()
                .unwrap_or_else(|| panic!("no anchor recorded for {id}"))
        };
        let mut defs = binomial::defs(&anchor);
        defs.extend(operator::defs(&anchor));
        defs.extend(generalized::defs(&anchor));
        defs.extend(chu::defs(&anchor));
        defs.extend(integral::defs(&anchor));
        defs
    })
}

pub fn lookup(id: &str) -> QResult<&'static IdentityDef> {
    register_all()
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| QError::UnknownIdentity(id.to_string()))
}
