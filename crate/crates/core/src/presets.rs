//! Channel parameters and region lists of the four reference plots.

use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::gaussian::ChannelParams;
use crate::geometry::RegionFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub channel: ChannelParams,
    pub regions: &'static [RegionFamily],
}

const SP1_ONLY: &[RegionFamily] = &[RegionFamily::GSp1];
const COMPARE: &[RegionFamily] = &[RegionFamily::GSp1, RegionFamily::GSp2, RegionFamily::G];

const fn ch(p1: f64, p2: f64, c12: f64, c21: f64) -> ChannelParams {
    ChannelParams { p1, p2, c12, c21 }
}

pub const FIG4: FigurePreset = FigurePreset {
    name: "fig4",
    channel: ch(6.0, 6.0, 0.0, 0.3),
    regions: SP1_ONLY,
};

/// Transmitter 1 silent; `c12` plays no role and is fixed to 0.
pub const FIG5: FigurePreset = FigurePreset {
    name: "fig5",
    channel: ch(0.0, 6.0, 0.0, 0.5),
    regions: SP1_ONLY,
};

pub const FIG6: FigurePreset = FigurePreset {
    name: "fig6",
    channel: ch(6.0, 6.0, 0.3, 2.0),
    regions: COMPARE,
};

pub const FIG7: FigurePreset = FigurePreset {
    name: "fig7",
    channel: ch(6.0, 6.0, 0.3, 6.0),
    regions: COMPARE,
};

pub const ALL: [FigurePreset; 4] = [FIG4, FIG5, FIG6, FIG7];

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL.into_iter().find(|p| p.name == s).ok_or_else(|| {
            invalid(
                "figure",
                format!("unknown figure `{s}` (fig4, fig5, fig6, fig7)"),
            )
        })
    }
}
