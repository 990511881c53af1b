//! Interchange formats: the SystemFile JSON document and the TraceFile
//! JSON-lines format, both bit-exact under fixed inputs.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::assembly::Placement;
use crate::engine::AssemblySequence;
use crate::error::{Error, Result};
use crate::geom::{Axis, Direction, Pos};
use crate::tile::{Glue, TileSystem};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GlueDoc {
    pub label: String,
    pub strength: u32,
}

impl From<&Glue> for GlueDoc {
    fn from(g: &Glue) -> Self {
        GlueDoc {
            label: g.label.clone(),
            strength: g.strength,
        }
    }
}

impl GlueDoc {
    fn to_glue(&self) -> Glue {
        Glue::new(self.label.clone(), self.strength)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TileDoc {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<GlueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<GlueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<GlueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<GlueDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DupleDoc {
    pub a: String,
    pub b: String,
    pub axis: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SeedCellDoc {
    pub x: i32,
    pub y: i32,
    pub tile: String,
}

/// The on-disk system document. Omitted glue sides are the null glue;
/// unknown fields are rejected.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub temperature: u32,
    pub tiles: Vec<TileDoc>,
    pub singletons: Vec<String>,
    pub duples: Vec<DupleDoc>,
    pub seed: Vec<SeedCellDoc>,
}

impl SystemFile {
    pub fn from_system(sys: &TileSystem) -> SystemFile {
        let glue_opt = |g: &Glue| -> Option<GlueDoc> {
            if g.is_null() {
                None
            } else {
                Some(g.into())
            }
        };
        SystemFile {
            name: Some(sys.name.clone()),
            temperature: sys.temperature,
            tiles: sys
                .tiles()
                .map(|(_, t)| TileDoc {
                    name: t.name.clone(),
                    n: glue_opt(t.glue(Direction::North)),
                    e: glue_opt(t.glue(Direction::East)),
                    s: glue_opt(t.glue(Direction::South)),
                    w: glue_opt(t.glue(Direction::West)),
                })
                .collect(),
            singletons: sys
                .singleton_ids()
                .map(|id| sys.tile(id).name.clone())
                .collect(),
            duples: sys
                .duples()
                .map(|(_, d)| DupleDoc {
                    a: sys.tile(d.a).name.clone(),
                    b: sys.tile(d.b).name.clone(),
                    axis: match d.axis {
                        Axis::EastWest => "ew".into(),
                        Axis::NorthSouth => "ns".into(),
                    },
                })
                .collect(),
            seed: sys
                .seed()
                .iter()
                .map(|(p, id)| SeedCellDoc {
                    x: p.x,
                    y: p.y,
                    tile: sys.tile(*id).name.clone(),
                })
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<Arc<TileSystem>> {
        let mut tiles = Vec::new();
        for t in &self.tiles {
            let mut tt = crate::tile::TileType::new(t.name.clone());
            if let Some(g) = &t.n {
                tt = tt.with_glue(Direction::North, g.to_glue());
            }
            if let Some(g) = &t.e {
                tt = tt.with_glue(Direction::East, g.to_glue());
            }
            if let Some(g) = &t.s {
                tt = tt.with_glue(Direction::South, g.to_glue());
            }
            if let Some(g) = &t.w {
                tt = tt.with_glue(Direction::West, g.to_glue());
            }
            tiles.push(tt);
        }
        let duples = self
            .duples
            .iter()
            .map(|d| {
                let axis = match d.axis.as_str() {
                    "ew" => Ok(Axis::EastWest),
                    "ns" => Ok(Axis::NorthSouth),
                    other => Err(Error::Format(format!("unknown duple axis {other:?}"))),
                }?;
                Ok((d.a.clone(), d.b.clone(), axis))
            })
            .collect::<Result<Vec<_>>>()?;
        TileSystem::new(
            self.name.clone().unwrap_or_else(|| "system".into()),
            tiles,
            self.singletons.clone(),
            duples,
            self.seed
                .iter()
                .map(|c| (Pos::new(c.x, c.y), c.tile.clone()))
                .collect(),
            self.temperature,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system docs serialize")
    }

    pub fn from_json(text: &str) -> Result<SystemFile> {
        Ok(serde_json::from_str(text)?)
    }

    /// Stable content hash over the canonical (compact) serialization.
    pub fn content_hash(&self) -> u64 {
        let mut canon = self.clone();
        canon.name = None;
        crate::hash::fnv1a_64(serde_json::to_string(&canon).unwrap().as_bytes())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceHeader {
    pub system: String,
    pub system_hash: String,
    pub steps: usize,
    /// Hash of the final assembly's canonical configuration.
    pub final_hash: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceLine {
    pub step: usize,
    pub kind: String,
    pub cells: Vec<[i32; 2]>,
    pub types: Vec<String>,
}

/// Serialize a run as a replayable JSON-lines trace.
pub fn write_trace(seq: &AssemblySequence) -> String {
    let sys = &seq.system;
    let header = TraceHeader {
        system: sys.name.clone(),
        system_hash: format!(
            "{:016x}",
            SystemFile::from_system(sys).content_hash()
        ),
        steps: seq.placements.len(),
        final_hash: format!("{:032x}", crate::hash::config_hash(&seq.result().canonical_key())),
    };
    let mut out = serde_json::to_string(&header).unwrap();
    out.push('\n');
    for (i, p) in seq.placements.iter().enumerate() {
        let cells = p.cells(sys);
        let line = TraceLine {
            step: i,
            kind: match p {
                Placement::Singleton { .. } => "singleton".into(),
                Placement::Duple { .. } => "duple".into(),
            },
            cells: cells.iter().map(|(p, _)| [p.x, p.y]).collect(),
            types: cells.iter().map(|(_, t)| sys.tile(*t).name.clone()).collect(),
        };
        out.push_str(&serde_json::to_string(&line).unwrap());
        out.push('\n');
    }
    out
}

/// Parse and replay a trace against its system, verifying every step and the
/// recorded final configuration hash.
pub fn replay_trace(sys: &Arc<TileSystem>, text: &str) -> Result<AssemblySequence> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: TraceHeader = serde_json::from_str(
        lines
            .next()
            .ok_or_else(|| Error::Format("empty trace".into()))?,
    )?;
    let expect_hash = format!(
        "{:016x}",
        SystemFile::from_system(sys).content_hash()
    );
    if header.system_hash != expect_hash {
        return Err(Error::Format(format!(
            "trace was recorded against a different system (hash {} vs {})",
            header.system_hash, expect_hash
        )));
    }
    let mut placements = Vec::new();
    for line in lines {
        let l: TraceLine = serde_json::from_str(line)?;
        let p = match l.kind.as_str() {
            "singleton" => {
                let tile = sys
                    .tile_by_name(&l.types[0])
                    .ok_or_else(|| Error::UnknownTile(l.types[0].clone()))?;
                Placement::Singleton {
                    pos: Pos::new(l.cells[0][0], l.cells[0][1]),
                    tile,
                }
            }
            "duple" => {
                if l.cells.len() != 2 || l.types.len() != 2 {
                    return Err(Error::Format("duple line needs two cells".into()));
                }
                let a = Pos::new(l.cells[0][0], l.cells[0][1]);
                let b = Pos::new(l.cells[1][0], l.cells[1][1]);
                let axis = match b - a {
                    (1, 0) => Axis::EastWest,
                    (0, 1) => Axis::NorthSouth,
                    _ => return Err(Error::Format("duple cells not adjacent".into())),
                };
                let duple = sys
                    .duples()
                    .find(|(_, d)| {
                        d.axis == axis
                            && sys.tile(d.a).name == l.types[0]
                            && sys.tile(d.b).name == l.types[1]
                    })
                    .map(|(id, _)| id)
                    .ok_or_else(|| {
                        Error::Format(format!(
                            "no duple type ({}, {})",
                            l.types[0], l.types[1]
                        ))
                    })?;
                Placement::Duple { duple, a_pos: a }
            }
            other => return Err(Error::Format(format!("unknown placement kind {other:?}"))),
        };
        placements.push(p);
    }
    let seq = AssemblySequence::from_placements(sys.clone(), placements)?;
    let got = format!("{:032x}", crate::hash::config_hash(&seq.result().canonical_key()));
    if got != header.final_hash {
        return Err(Error::Format(
            "replayed assembly differs from the recorded final hash".into(),
        ));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulerPolicy};
    use crate::gallery::{make_gn_staircase, make_zigzag_counter, Orientation};

    #[test]
    fn system_roundtrip() {
        let sys = make_zigzag_counter(2, 0, 3, Orientation::North).unwrap();
        let doc = SystemFile::from_system(&sys);
        let text = doc.to_json();
        let parsed = SystemFile::from_json(&text).unwrap();
        assert_eq!(doc, parsed, "parse . serialize = identity");
        let sys2 = parsed.to_system().unwrap();
        assert_eq!(sys.tile_count(), sys2.tile_count());
        assert_eq!(sys.temperature, sys2.temperature);
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{"temperature": 1, "tiles": [], "singletons": [], "duples": [], "seed": [], "extra": 3}"#;
        assert!(SystemFile::from_json(bad).is_err());
    }

    #[test]
    fn trace_roundtrip_with_duples() {
        let sys = crate::gallery::make_s8_system(1).unwrap();
        let seq = run(&sys, SchedulerPolicy::Random(7), 100);
        let text = write_trace(&seq);
        let replayed = replay_trace(&sys, &text).unwrap();
        assert!(replayed.result().same_configuration(seq.result()));
    }

    #[test]
    fn trace_against_wrong_system_rejected() {
        let a = make_gn_staircase(1, 0).unwrap();
        let b = make_gn_staircase(1, 2).unwrap();
        let seq = run(&a, SchedulerPolicy::LexMin, 10);
        let text = write_trace(&seq);
        assert!(replay_trace(&b, &text).is_err());
    }
}
