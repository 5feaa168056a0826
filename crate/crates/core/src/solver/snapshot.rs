//! Little-endian binary snapshots.
//!
//! Each record is
//!
//! ```text
//! "CNSE" version:u32 nx:u32 ny:u32
//! Lx Ly time a0 gamma mu eta epsilon : f64
//! topology:u8
//! rho[nx*ny] m1[nx*ny] m2[nx*ny] : f64, row-major
//! sections…  "DONE"
//! ```
//!
//! Optional sections are tagged with four bytes:
//! `"WALL"` (u·τ bottom, u·τ top, traction bottom, traction top; nx f64 each),
//! `"BCSP"` (kind:u8 lambda:f64) and `"REFR"` (flag:u8, set for reference pairs).
//! A trajectory file is a plain concatenation of records.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{BoundaryTrace, Grid, ScalarField, Topology, VectorField, Wall, WallTraces};
use crate::reference::TestPair;
use crate::thermo::{GasModel, SlipLaw};

use super::{BcSpec, RunStats, Snapshot, State, Trajectory, WallRecord};

pub const MAGIC: &[u8; 4] = b"CNSE";
pub const VERSION: u32 = 1;

/// One decoded record.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub state: State,
    pub model: GasModel,
    pub walls: Option<WallRecord>,
    pub bc: Option<BcSpec>,
    pub reference: bool,
}

fn put_f64s(out: &mut Vec<u8>, v: &[f64]) {
    for x in v {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

pub fn encode_record(
    state: &State,
    model: &GasModel,
    walls: Option<&WallRecord>,
    bc: Option<&BcSpec>,
    reference: bool,
) -> Vec<u8> {
    let g = state.grid;
    let mut out = Vec::with_capacity(64 + 24 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.nx as u32).to_le_bytes());
    out.extend_from_slice(&(g.ny as u32).to_le_bytes());
    put_f64s(&mut out, &[g.lx, g.ly, state.time, model.a0, model.gamma, model.mu, model.eta, state.epsilon]);
    out.push(g.topology.code());
    put_f64s(&mut out, &state.rho.data);
    put_f64s(&mut out, &state.mom.x);
    put_f64s(&mut out, &state.mom.y);
    if let Some(w) = walls {
        out.extend_from_slice(b"WALL");
        put_f64s(&mut out, &w.u_tau.bottom.values);
        put_f64s(&mut out, &w.u_tau.top.values);
        put_f64s(&mut out, &w.traction.bottom.values);
        put_f64s(&mut out, &w.traction.top.values);
    }
    if let Some(bc) = bc {
        let (code, lambda) = bc.code();
        out.extend_from_slice(b"BCSP");
        out.push(code);
        put_f64s(&mut out, &[lambda]);
    }
    if reference {
        out.extend_from_slice(b"REFR");
        out.push(1);
    }
    out.extend_from_slice(b"DONE");
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format(format!("truncated record at byte {}", self.pos)));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }

    fn done(&self) -> bool {
        self.pos == self.buf.len()
    }
}

fn decode_one(c: &mut Cursor) -> Result<Record> {
    if c.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let nx = c.u32()? as usize;
    let ny = c.u32()? as usize;
    let h = c.f64s(8)?;
    let topology = Topology::from_code(c.u8()?).ok_or_else(|| Error::Format("unknown topology".into()))?;
    let grid = Grid::new(nx, ny, h[0], h[1], topology).map_err(|e| Error::Format(e.to_string()))?;
    let n = grid.len();
    let rho = ScalarField { grid, data: c.f64s(n)? };
    let mom = VectorField { grid, x: c.f64s(n)?, y: c.f64s(n)? };
    let mut walls = None;
    let mut bc = None;
    let mut reference = false;
    loop {
        match c.take(4)? {
            b"DONE" => break,
            b"WALL" => {
                let tr = |w: Wall, v: Vec<f64>| BoundaryTrace::new(&grid, w, v);
                let ub = tr(Wall::Bottom, c.f64s(nx)?)?;
                let ut = tr(Wall::Top, c.f64s(nx)?)?;
                let tb = tr(Wall::Bottom, c.f64s(nx)?)?;
                let tt = tr(Wall::Top, c.f64s(nx)?)?;
                walls = Some(WallRecord {
                    u_tau: WallTraces { bottom: ub, top: ut },
                    traction: WallTraces { bottom: tb, top: tt },
                });
            }
            b"BCSP" => {
                let code = c.u8()?;
                let lambda = c.f64()?;
                bc = Some(BcSpec::from_code(code, lambda).ok_or_else(|| Error::Format("unknown wall condition".into()))?);
            }
            b"REFR" => reference = c.u8()? != 0,
            tag => return Err(Error::Format(format!("unknown section {:?}", String::from_utf8_lossy(tag)))),
        }
    }
    let slip_law = match bc {
        Some(BcSpec::NoSlip) => SlipLaw::NoSlip,
        Some(BcSpec::NavierSlip { lambda }) => SlipLaw::Power { lambda0: lambda, alpha: 0.0 },
        _ => SlipLaw::free_slip(),
    };
    let model = GasModel { a0: h[3], gamma: h[4], mu: h[5], eta: h[6], slip_law };
    let state = State { grid, rho, mom, time: h[2], epsilon: h[7] };
    Ok(Record { state, model, walls, bc, reference })
}

pub fn decode_records(buf: &[u8]) -> Result<Vec<Record>> {
    let mut c = Cursor { buf, pos: 0 };
    let mut out = Vec::new();
    while !c.done() {
        out.push(decode_one(&mut c)?);
    }
    Ok(out)
}

pub fn encode_trajectory(traj: &Trajectory) -> Vec<u8> {
    let mut out = Vec::new();
    for s in &traj.snapshots {
        out.extend(encode_record(&s.state, &traj.model, s.walls.as_ref(), Some(&traj.bc), false));
    }
    out
}

pub fn write_trajectory(path: impl AsRef<Path>, traj: &Trajectory) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode_trajectory(traj))?;
    Ok(())
}

/// Reads a trajectory; run statistics are not stored and come back zeroed.
pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Trajectory> {
    let mut buf = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut buf)?;
    let records = decode_records(&buf)?;
    let first = records.first().ok_or_else(|| Error::Format("empty trajectory".into()))?;
    let model = first.model;
    let grid = first.state.grid;
    let bc = first.bc.unwrap_or(if grid.has_walls() { BcSpec::NoSlip } else { BcSpec::Periodic });
    let mut snapshots = Vec::with_capacity(records.len());
    for r in records {
        if r.state.grid != grid {
            return Err(Error::Format("grid changes within trajectory".into()));
        }
        if r.reference {
            return Err(Error::Format("reference record inside a trajectory".into()));
        }
        snapshots.push(Snapshot { state: r.state, walls: r.walls });
    }
    Ok(Trajectory { model, bc, snapshots, stats: RunStats::default() })
}

/// Stores a test pair as `(r, r·w)` records flagged as reference data.
pub fn encode_test_pair(pair: &TestPair, model: &GasModel) -> Vec<u8> {
    let mut out = Vec::new();
    for f in &pair.frames {
        let g = pair.grid;
        let mom = VectorField {
            grid: g,
            x: f.r.data.iter().zip(&f.w.x).map(|(r, w)| r * w).collect(),
            y: f.r.data.iter().zip(&f.w.y).map(|(r, w)| r * w).collect(),
        };
        let state = State { grid: g, rho: f.r.clone(), mom, time: f.time, epsilon: 0.0 };
        out.extend(encode_record(&state, model, None, None, true));
    }
    out
}
