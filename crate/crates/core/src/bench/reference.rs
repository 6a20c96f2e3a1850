//! Published ISNR figures of the benchmark, kept as an immutable data asset.

use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "ForWaRD")]
    Forward,
    #[serde(rename = "APE-ADMM")]
    ApeAdmm,
    #[serde(rename = "L0-Abs")]
    L0Abs,
    #[serde(rename = "SURE-LET")]
    SureLet,
    #[serde(rename = "BM3DDEB")]
    Bm3dDeb,
    #[serde(rename = "GFD")]
    Gfd,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Forward,
        Method::ApeAdmm,
        Method::L0Abs,
        Method::SureLet,
        Method::Bm3dDeb,
        Method::Gfd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Forward => "ForWaRD",
            Method::ApeAdmm => "APE-ADMM",
            Method::L0Abs => "L0-Abs",
            Method::SureLet => "SURE-LET",
            Method::Bm3dDeb => "BM3DDEB",
            Method::Gfd => "GFD",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceIsnr {
    pub image: String,
    pub scenario: u8,
    pub method: Method,
    pub isnr_db: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBsnr {
    pub image: String,
    pub scenario: u8,
    pub bsnr_db: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub bsnr: Vec<ReferenceBsnr>,
    pub isnr: Vec<ReferenceIsnr>,
}

pub const CANONICAL_IMAGES: [&str; 4] = ["cameraman", "house", "lena", "man"];

// One row per (image, method); columns are scenarios 1..5.
const BSNR_ROWS: [(&str, [f64; 5]); 4] = [
    ("cameraman", [31.87, 25.85, 40.00, 18.53, 29.19]),
    ("house", [29.16, 23.14, 40.00, 15.99, 26.61]),
    ("lena", [29.89, 23.87, 40.00, 16.47, 27.18]),
    ("man", [29.72, 23.70, 40.00, 16.32, 27.02]),
];

#[allow(clippy::approx_constant)]
const ISNR_ROWS: [(&str, Method, [f64; 5]); 24] = [
    ("cameraman", Method::Forward, [6.76, 5.08, 7.40, 2.40, 3.14]),
    ("cameraman", Method::ApeAdmm, [7.41, 5.24, 8.56, 2.57, 3.36]),
    ("cameraman", Method::L0Abs, [7.70, 5.55, 9.10, 2.93, 3.49]),
    ("cameraman", Method::SureLet, [7.54, 5.22, 7.84, 2.67, 3.27]),
    ("cameraman", Method::Bm3dDeb, [8.19, 6.40, 8.34, 3.34, 3.73]),
    ("cameraman", Method::Gfd, [8.38, 6.52, 9.73, 3.57, 4.02]),
    ("house", Method::Forward, [7.35, 6.03, 9.56, 3.19, 3.85]),
    ("house", Method::ApeAdmm, [7.98, 6.57, 10.39, 4.49, 4.72]),
    ("house", Method::L0Abs, [8.40, 7.12, 11.06, 4.55, 4.80]),
    ("house", Method::SureLet, [8.71, 6.90, 10.72, 4.35, 4.26]),
    ("house", Method::Bm3dDeb, [9.32, 8.14, 10.85, 5.13, 4.79]),
    ("house", Method::Gfd, [9.39, 7.75, 12.02, 5.21, 5.39]),
    ("lena", Method::Forward, [6.05, 4.90, 6.97, 2.93, 3.50]),
    ("lena", Method::ApeAdmm, [6.36, 4.98, 7.87, 3.52, 3.61]),
    ("lena", Method::L0Abs, [6.66, 5.71, 7.79, 4.09, 4.22]),
    ("lena", Method::SureLet, [7.71, 5.88, 7.96, 4.42, 4.25]),
    ("lena", Method::Bm3dDeb, [7.95, 6.53, 8.06, 4.81, 4.37]),
    ("lena", Method::Gfd, [8.12, 6.65, 8.97, 4.77, 4.95]),
    ("man", Method::Forward, [5.15, 3.87, 6.47, 2.19, 2.71]),
    ("man", Method::ApeAdmm, [5.82, 4.28, 7.14, 2.58, 2.98]),
    ("man", Method::L0Abs, [5.74, 4.02, 7.19, 2.61, 3.00]),
    ("man", Method::SureLet, [6.01, 4.32, 6.89, 2.75, 3.01]),
    ("man", Method::Bm3dDeb, [6.34, 4.81, 6.99, 3.05, 3.22]),
    ("man", Method::Gfd, [6.29, 4.83, 7.67, 3.11, 3.50]),
];

impl ReferenceTable {
    pub fn published() -> Self {
        let bsnr = BSNR_ROWS
            .iter()
            .flat_map(|(image, vals)| {
                vals.iter().enumerate().map(move |(i, &v)| ReferenceBsnr {
                    image: image.to_string(),
                    scenario: i as u8 + 1,
                    bsnr_db: v,
                })
            })
            .collect();
        let isnr = ISNR_ROWS
            .iter()
            .flat_map(|(image, method, vals)| {
                vals.iter().enumerate().map(move |(i, &v)| ReferenceIsnr {
                    image: image.to_string(),
                    scenario: i as u8 + 1,
                    method: *method,
                    isnr_db: v,
                })
            })
            .collect();
        Self { bsnr, isnr }
    }

    /// Case-insensitive lookup by image name (file stem).
    pub fn isnr(&self, image: &str, scenario: u8, method: Method) -> Option<f64> {
        self.isnr
            .iter()
            .find(|e| e.scenario == scenario && e.method == method && e.image.eq_ignore_ascii_case(image))
            .map(|e| e.isnr_db)
    }

    pub fn bsnr(&self, image: &str, scenario: u8) -> Option<f64> {
        self.bsnr
            .iter()
            .find(|e| e.scenario == scenario && e.image.eq_ignore_ascii_case(image))
            .map(|e| e.bsnr_db)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| GfdError::InvalidParameter(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GfdError::Parse {
            offset: e.column(),
            message: e.to_string(),
        })
    }
}
