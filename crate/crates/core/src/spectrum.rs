//! Flex-grid slot bookkeeping with first-fit assignment and spectrum continuity.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type LightpathId = usize;
pub type MwsId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotState {
    Free,
    Used(LightpathId),
    /// Held for a not yet activated line of a fixed-FSR source.
    Reserved(MwsId),
}

impl fmt::Display for SlotState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotState::Free => f.write_str("free"),
            SlotState::Used(id) => write!(f, "used(lp {id})"),
            SlotState::Reserved(id) => write!(f, "reserved(mws {id})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotBlock {
    pub start: usize,
    pub width: usize,
}

impl SlotBlock {
    pub fn new(start: usize, width: usize) -> Self {
        Self { start, width }
    }

    pub fn end(&self) -> usize {
        self.start + self.width
    }

    pub fn slots(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridParams {
    pub slots_per_link: usize,
    pub slot_width_ghz: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            slots_per_link: 400,
            slot_width_ghz: crate::phys::SLOT_WIDTH_GHZ,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("slot {slot} on link {link} is {state}")]
    Conflict {
        link: usize,
        slot: usize,
        state: SlotState,
    },
    #[error("block {block:?} exceeds the {slots} slots of a link")]
    OutOfRange { block: SlotBlock, slots: usize },
    #[error("allocation state must not be free")]
    FreeAllocation,
    #[error("unknown reservation {0}")]
    UnknownReservation(MwsId),
    #[error("reservation {0} already exists")]
    DuplicateReservation(MwsId),
    #[error("source {mws} has no line {line}")]
    NoSuchLine { mws: MwsId, line: usize },
    #[error("line {line} of source {mws} is already active")]
    LineAlreadyActive { mws: MwsId, line: usize },
}

/// Contiguous block held for all lines of one fixed-FSR source, lines adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct Reservation {
    pub links: Vec<usize>,
    pub block: SlotBlock,
    pub line_width: usize,
    pub active: Vec<Option<LightpathId>>,
}

impl Reservation {
    pub fn line_block(&self, line: usize) -> SlotBlock {
        SlotBlock::new(self.block.start + line * self.line_width, self.line_width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlotCounts {
    pub free: usize,
    pub used: usize,
    pub reserved: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    params: GridParams,
    occupancy: Vec<Vec<SlotState>>,
    reservations: BTreeMap<MwsId, Reservation>,
}

impl SpectrumGrid {
    pub fn new(link_count: usize, params: GridParams) -> Self {
        Self {
            params,
            occupancy: vec![vec![SlotState::Free; params.slots_per_link]; link_count],
            reservations: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> &GridParams {
        &self.params
    }

    pub fn link_count(&self) -> usize {
        self.occupancy.len()
    }

    pub fn slots_per_link(&self) -> usize {
        self.params.slots_per_link
    }

    pub fn state(&self, link: usize, slot: usize) -> SlotState {
        self.occupancy[link][slot]
    }

    pub fn link_states(&self, link: usize) -> &[SlotState] {
        &self.occupancy[link]
    }

    /// Lowest-index block of `width` slots free on every link of the path.
    pub fn first_fit(&self, links: &[usize], width: usize) -> Option<SlotBlock> {
        let slots = self.params.slots_per_link;
        if width == 0 || width > slots {
            return None;
        }
        let mut run = 0;
        for s in 0..slots {
            if links
                .iter()
                .all(|&l| self.occupancy[l][s] == SlotState::Free)
            {
                run += 1;
                if run == width {
                    return Some(SlotBlock::new(s + 1 - width, width));
                }
            } else {
                run = 0;
            }
        }
        None
    }

    fn check_range(&self, block: SlotBlock) -> Result<(), SpectrumError> {
        if block.width == 0 || block.end() > self.params.slots_per_link {
            return Err(SpectrumError::OutOfRange {
                block,
                slots: self.params.slots_per_link,
            });
        }
        Ok(())
    }

    fn check_free(&self, links: &[usize], block: SlotBlock) -> Result<(), SpectrumError> {
        self.check_range(block)?;
        for &link in links {
            for slot in block.slots() {
                let state = self.occupancy[link][slot];
                if state != SlotState::Free {
                    return Err(SpectrumError::Conflict { link, slot, state });
                }
            }
        }
        Ok(())
    }

    /// Marks `block` on every link of the path; nothing changes unless all slots are free.
    pub fn allocate(
        &mut self,
        links: &[usize],
        block: SlotBlock,
        state: SlotState,
    ) -> Result<(), SpectrumError> {
        if state == SlotState::Free {
            return Err(SpectrumError::FreeAllocation);
        }
        self.check_free(links, block)?;
        for &link in links {
            self.occupancy[link][block.slots()].fill(state);
        }
        Ok(())
    }

    pub fn release(&mut self, links: &[usize], block: SlotBlock) -> Result<(), SpectrumError> {
        self.check_range(block)?;
        for &link in links {
            self.occupancy[link][block.slots()].fill(SlotState::Free);
        }
        Ok(())
    }

    /// Reserves `n_lines` adjacent lines of `line_width` slots each for source `mws`,
    /// first fit along the path. `Ok(None)` when no contiguous block is free.
    pub fn reserve_fixed_fsr(
        &mut self,
        links: &[usize],
        n_lines: usize,
        line_width: usize,
        mws: MwsId,
    ) -> Result<Option<SlotBlock>, SpectrumError> {
        if self.reservations.contains_key(&mws) {
            return Err(SpectrumError::DuplicateReservation(mws));
        }
        let Some(block) = self.first_fit(links, n_lines * line_width) else {
            return Ok(None);
        };
        self.allocate(links, block, SlotState::Reserved(mws))?;
        self.reservations.insert(
            mws,
            Reservation {
                links: links.to_vec(),
                block,
                line_width,
                active: vec![None; n_lines],
            },
        );
        Ok(Some(block))
    }

    /// Hands the slots of one reserved line to lightpath `lp`.
    pub fn activate_reserved_line(
        &mut self,
        mws: MwsId,
        line: usize,
        lp: LightpathId,
    ) -> Result<SlotBlock, SpectrumError> {
        let res = self
            .reservations
            .get_mut(&mws)
            .ok_or(SpectrumError::UnknownReservation(mws))?;
        let slot = res
            .active
            .get_mut(line)
            .ok_or(SpectrumError::NoSuchLine { mws, line })?;
        if slot.is_some() {
            return Err(SpectrumError::LineAlreadyActive { mws, line });
        }
        *slot = Some(lp);
        let block = res.line_block(line);
        for &link in &res.links {
            self.occupancy[link][block.slots()].fill(SlotState::Used(lp));
        }
        Ok(block)
    }

    pub fn reservation(&self, mws: MwsId) -> Option<&Reservation> {
        self.reservations.get(&mws)
    }

    pub fn reservations(&self) -> impl Iterator<Item = (MwsId, &Reservation)> {
        self.reservations.iter().map(|(&k, v)| (k, v))
    }

    pub fn counts(&self, link: usize) -> SlotCounts {
        let mut c = SlotCounts::default();
        for s in &self.occupancy[link] {
            match s {
                SlotState::Free => c.free += 1,
                SlotState::Used(_) => c.used += 1,
                SlotState::Reserved(_) => c.reserved += 1,
            }
        }
        c
    }

    /// Occupancy dump, one row per non-free slot: `link_id,slot,state,owner`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "link_id,slot,state,owner")?;
        for (link, states) in self.occupancy.iter().enumerate() {
            for (slot, s) in states.iter().enumerate() {
                match s {
                    SlotState::Free => {}
                    SlotState::Used(id) => writeln!(w, "{link},{slot},used,lp{id}")?,
                    SlotState::Reserved(id) => writeln!(w, "{link},{slot},reserved,mws{id}")?,
                }
            }
        }
        Ok(())
    }
}
