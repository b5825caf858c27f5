use super::{decode, encode, Instruction, IsaError, DEFAULT_IMEM_WORDS};
use crate::memsys::DM_WORDS;
use crate::Word;

const MAGIC: &[u8; 4] = b"CRV1";
const SECTION_DM: u32 = 1;
const SECTION_HOST: u32 = 2;

/// An executable image: instructions (entry at index 0), the initial
/// data-memory contents and the host-memory image DMA reads from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    /// Initial DM words starting at address 0; not counted as execution time.
    pub dm_image: Vec<Word>,
    /// Host (DDR) memory starting at host address 0.
    pub host_image: Vec<Word>,
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        Program { instructions, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn check_fits(&self, imem_words: usize) -> Result<(), IsaError> {
        if self.instructions.len() > imem_words {
            return Err(IsaError::Format(format!(
                "{} instructions exceed instruction memory of {imem_words}",
                self.instructions.len()
            )));
        }
        if self.dm_image.len() > DM_WORDS {
            return Err(IsaError::Format(format!("DM image of {} words", self.dm_image.len())));
        }
        Ok(())
    }

    pub fn encode_words(&self) -> Result<Vec<u32>, IsaError> {
        self.instructions.iter().map(encode).collect()
    }

    /// `CRV1`, u32 instruction count, LE instruction words, then optional
    /// sections of (u32 tag, u32 word count, LE u64 words).
    pub fn to_binary(&self) -> Result<Vec<u8>, IsaError> {
        self.check_fits(DEFAULT_IMEM_WORDS.max(self.instructions.len()))?;
        let mut out = MAGIC.to_vec();
        out.extend_from_slice(&(self.instructions.len() as u32).to_le_bytes());
        for w in self.encode_words()? {
            out.extend_from_slice(&w.to_le_bytes());
        }
        for (tag, image) in [(SECTION_DM, &self.dm_image), (SECTION_HOST, &self.host_image)] {
            if image.is_empty() {
                continue;
            }
            out.extend_from_slice(&tag.to_le_bytes());
            out.extend_from_slice(&(image.len() as u32).to_le_bytes());
            for w in image {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self, IsaError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(IsaError::Format("missing CRV1 magic".into()));
        }
        let count = r.u32()? as usize;
        let mut program = Program::default();
        for _ in 0..count {
            program.instructions.push(decode(r.u32()?)?);
        }
        while !r.done() {
            let tag = r.u32()?;
            let n = r.u32()? as usize;
            let raw = r.take(n.checked_mul(8).ok_or_else(|| IsaError::Format("section too large".into()))?)?;
            let words: Vec<Word> =
                raw.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
            match tag {
                SECTION_DM => program.dm_image = words,
                SECTION_HOST => program.host_image = words,
                t => return Err(IsaError::Format(format!("unknown section tag {t}"))),
            }
        }
        program.check_fits(usize::MAX)?;
        Ok(program)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], IsaError> {
        let s = self
            .bytes
            .get(self.pos..self.pos.saturating_add(n))
            .ok_or_else(|| IsaError::Format("truncated".into()))?;
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, IsaError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn done(&self) -> bool {
        self.pos >= self.bytes.len()
    }
}
