//! Published resonator tables kept as regression fixtures, stored exactly as
//! printed. Each row carries where its numbers came from.

use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Simulation,
    Measurement,
    Model,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Simulation => "simulation",
            Provenance::Measurement => "measurement",
            Provenance::Model => "model",
        }
    }
}

/// One table row. `values` are f0 (MHz), L (µH), C (pF), R (Ω) and Q, as
/// printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureRow {
    pub label: &'static str,
    pub provenance: Provenance,
    pub values: [&'static str; 5],
}

impl FixtureRow {
    pub fn f0_mhz(&self) -> f64 {
        self.value(0)
    }
    pub fn l_uh(&self) -> f64 {
        self.value(1)
    }
    pub fn c_pf(&self) -> f64 {
        self.value(2)
    }
    pub fn r_ohm(&self) -> f64 {
        self.value(3)
    }
    pub fn q(&self) -> f64 {
        self.value(4)
    }

    fn value(&self, i: usize) -> f64 {
        self.values[i].parse().expect("fixture values are numeric")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureTable {
    pub id: &'static str,
    pub description: &'static str,
    pub rows: &'static [FixtureRow],
}

impl FixtureTable {
    pub fn row(&self, label: &str) -> Option<&FixtureRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

const fn sim(label: &'static str, values: [&'static str; 5]) -> FixtureRow {
    FixtureRow {
        label,
        provenance: Provenance::Simulation,
        values,
    }
}

const fn meas(label: &'static str, values: [&'static str; 5]) -> FixtureRow {
    FixtureRow {
        label,
        provenance: Provenance::Measurement,
        values,
    }
}

const fn model(label: &'static str, values: [&'static str; 5]) -> FixtureRow {
    FixtureRow {
        label,
        provenance: Provenance::Model,
        values,
    }
}

pub const TABLES: [FixtureTable; 8] = [
    FixtureTable {
        id: "stripline",
        description: "plated stripline loop, full-wave simulation",
        rows: &[
            sim("2 mm", ["54.7", "0.400", "21.2", "0.532", "258"]),
            sim("3 mm", ["49.1", "0.379", "27.7", "0.394", "297"]),
            sim("4 mm", ["44.9", "0.376", "33.5", "0.325", "325"]),
            sim("5 mm", ["41.7", "0.367", "39.7", "0.279", "345"]),
            sim("6 mm", ["39.2", "0.357", "46.4", "0.240", "365"]),
            sim("7 mm", ["37.0", "0.350", "52.9", "0.215", "378"]),
            sim("8 mm", ["35.2", "0.342", "59.9", "0.195", "388"]),
            sim("9 mm", ["33.6", "0.344", "65.5", "0.183", "396"]),
            sim("10 mm", ["32.2", "0.337", "72.6", "0.166", "410"]),
        ],
    },
    FixtureTable {
        id: "stripline-unplated",
        description: "unplated stripline loop, full-wave simulation",
        rows: &[
            sim("2 mm", ["54.5", "0.406", "21.0", "0.527", "264"]),
            sim("3 mm", ["49.1", "0.381", "27.6", "0.381", "308"]),
            sim("4 mm", ["45.0", "0.372", "33.6", "0.343", "307"]),
            sim("5 mm", ["41.8", "0.362", "40.0", "0.264", "360"]),
            sim("6 mm", ["39.2", "0.357", "46.0", "0.231", "382"]),
            sim("7 mm", ["37.1", "0.353", "52.2", "0.205", "401"]),
            sim("8 mm", ["35.3", "0.344", "59.3", "0.183", "415"]),
            sim("9 mm", ["33.7", "0.338", "66.1", "0.168", "427"]),
            sim("10 mm", ["32.3", "0.336", "72.2", "0.155", "440"]),
        ],
    },
    FixtureTable {
        id: "stripline-shifted",
        description: "plated stripline loop, slit 10° from the feed, full-wave simulation",
        rows: &[
            sim("2 mm", ["37.8", "0.416", "42.5", "0.388", "255"]),
            sim("3 mm", ["34.0", "0.396", "55.4", "0.302", "280"]),
            sim("4 mm", ["31.2", "0.386", "67.5", "0.255", "296"]),
            sim("5 mm", ["29.0", "0.368", "81.8", "0.219", "306"]),
            sim("6 mm", ["27.3", "0.360", "94.5", "0.194", "319"]),
            sim("7 mm", ["25.8", "0.351", "108.5", "0.175", "326"]),
            sim("8 mm", ["24.5", "0.348", "121.1", "0.164", "327"]),
            sim("9 mm", ["23.5", "0.338", "136.2", "0.147", "339"]),
            sim("10 mm", ["22.5", "0.335", "149.0", "0.139", "343"]),
        ],
    },
    FixtureTable {
        id: "stripline-comparison",
        description: "unplated stripline loop, W = 10 mm",
        rows: &[
            sim("simulation", ["32.3", "0.336", "72.2", "0.16", "440"]),
            meas("measurement", ["32.1", "0.326", "75.4", "0.20", "348"]),
            model("model", ["29.0", "0.364", "82.5", "0.14", "490"]),
        ],
    },
    FixtureTable {
        id: "microstrip",
        description: "microstrip loop, full-wave simulation",
        rows: &[
            sim("2 mm", ["68.6", "0.414", "13.0", "0.598", "299"]),
            sim("3 mm", ["61.6", "0.409", "16.4", "0.477", "331"]),
            sim("4 mm", ["57.1", "0.391", "19.9", "0.394", "356"]),
            sim("5 mm", ["53.4", "0.381", "23.4", "0.343", "372"]),
            sim("6 mm", ["50.9", "0.372", "26.4", "0.291", "407"]),
            sim("7 mm", ["48.4", "0.362", "29.8", "0.256", "430"]),
            sim("8 mm", ["46.0", "0.367", "32.6", "0.248", "427"]),
            sim("9 mm", ["44.2", "0.364", "35.6", "0.229", "442"]),
            sim("10 mm", ["42.8", "0.358", "38.7", "0.203", "474"]),
        ],
    },
    FixtureTable {
        id: "microstrip-shifted",
        description: "microstrip loop, slit 10° from the feed, full-wave simulation",
        rows: &[
            sim("2 mm", ["46.4", "0.443", "26.5", "0.369", "350"]),
            sim("3 mm", ["42.4", "0.431", "32.7", "0.289", "398"]),
            sim("4 mm", ["39.3", "0.421", "39.0", "0.267", "389"]),
            sim("5 mm", ["36.9", "0.407", "45.8", "0.234", "403"]),
            sim("6 mm", ["34.8", "0.408", "51.3", "0.219", "407"]),
            sim("7 mm", ["32.9", "0.401", "58.2", "0.209", "398"]),
            sim("8 mm", ["31.5", "0.377", "67.6", "0.185", "403"]),
            sim("9 mm", ["30.3", "0.384", "71.8", "0.179", "409"]),
            sim("10 mm", ["29.3", "0.375", "79.0", "0.167", "412"]),
        ],
    },
    FixtureTable {
        id: "lumped",
        description: "wire loop with a lumped 30 pF capacitor",
        rows: &[sim("lumped", ["42.4", "0.469", "30", "0.244", "512"])],
    },
    FixtureTable {
        id: "microstrip-comparison",
        description: "microstrip loop, W = 10 mm",
        rows: &[
            sim("simulation", ["42.8", "0.358", "38.7", "0.20", "474"]),
            meas("measurement", ["42.1", "0.347", "41.3", "0.24", "381"]),
            model("model", ["39.2", "0.364", "45.3", "0.26", "346"]),
        ],
    },
];

/// SHA-256 of [`canonical_text`] for the shipped tables.
pub const FIXTURE_SHA256: &str = "42ec75f9a65e9a33e0c1a428c61595040c577bfe40b2f825a2bec0541bc8fbfb";

pub fn table(id: &str) -> Option<&'static FixtureTable> {
    TABLES.iter().find(|t| t.id == id)
}

/// One line per row: `id|label|provenance|f0|L|C|R|Q`.
pub fn canonical_text(tables: &[FixtureTable]) -> String {
    let mut out = String::new();
    for t in tables {
        for r in t.rows {
            out.push_str(&format!("{}|{}|{}|{}\n", t.id, r.label, r.provenance.as_str(), r.values.join("|")));
        }
    }
    out
}

pub fn digest(tables: &[FixtureTable]) -> String {
    hex::encode(Sha256::digest(canonical_text(tables).as_bytes()))
}
