//! Five-instruction ISA of the 4-bit processor: encoding, assembler, ROM
//! image and a sequential reference interpreter.
//!
//! Word layout (9 bits): `opcode[8:6] rd[5:4] field[3:0]`, where `field`
//! is the 4-bit immediate for MOVI and `00·rs` otherwise.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::memory::{ROM_BITS, ROM_WORDS};
use super::DesignError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Opcode {
    Nop,
    Mov,
    Movi,
    Add,
    Mult,
}

impl Opcode {
    pub const ALL: [Opcode; 5] = [
        Opcode::Nop,
        Opcode::Mov,
        Opcode::Movi,
        Opcode::Add,
        Opcode::Mult,
    ];

    pub fn code(self) -> u16 {
        match self {
            Opcode::Nop => 0b000,
            Opcode::Mov => 0b001,
            Opcode::Movi => 0b010,
            Opcode::Add => 0b011,
            Opcode::Mult => 0b100,
        }
    }

    pub fn from_code(code: u16) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.code() == code)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Nop => "NOP",
            Opcode::Mov => "MOV",
            Opcode::Movi => "MOVI",
            Opcode::Add => "ADD",
            Opcode::Mult => "MULT",
        }
    }

    /// Whether the instruction writes `rd`.
    pub fn writes(self) -> bool {
        self != Opcode::Nop
    }
}

impl FromStr for Opcode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|o| o.mnemonic().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mnemonic `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Instruction {
    pub op: Opcode,
    pub rd: u8,
    pub rs: u8,
    pub imm: u8,
}

impl Instruction {
    pub fn nop() -> Self {
        Self {
            op: Opcode::Nop,
            rd: 0,
            rs: 0,
            imm: 0,
        }
    }

    pub fn rr(op: Opcode, rd: u8, rs: u8) -> Self {
        Self { op, rd, rs, imm: 0 }
    }

    pub fn movi(rd: u8, imm: u8) -> Self {
        Self {
            op: Opcode::Movi,
            rd,
            rs: 0,
            imm,
        }
    }

    /// Registers read by the instruction.
    pub fn reads(&self) -> Vec<u8> {
        match self.op {
            Opcode::Nop | Opcode::Movi => vec![],
            Opcode::Mov => vec![self.rs],
            Opcode::Add | Opcode::Mult => vec![self.rd, self.rs],
        }
    }

    /// Register written, if any.
    pub fn writes(&self) -> Option<u8> {
        self.op.writes().then_some(self.rd)
    }

    pub fn encode(&self) -> u16 {
        let field = match self.op {
            Opcode::Movi => self.imm as u16 & 0xF,
            Opcode::Nop => 0,
            _ => self.rs as u16 & 0x3,
        };
        let rd = if self.op == Opcode::Nop {
            0
        } else {
            self.rd as u16 & 0x3
        };
        self.op.code() << 6 | rd << 4 | field
    }

    /// Inverse of [`Self::encode`]; rejects illegal opcodes and non-zero
    /// unused fields.
    pub fn decode(word: u16) -> Result<Self, DesignError> {
        let bad = || DesignError::Decode { word };
        if word >> ROM_BITS != 0 {
            return Err(bad());
        }
        let op = Opcode::from_code(word >> 6).ok_or_else(bad)?;
        let rd = (word >> 4 & 0x3) as u8;
        let field = (word & 0xF) as u8;
        Ok(match op {
            Opcode::Nop if rd != 0 || field != 0 => return Err(bad()),
            Opcode::Nop => Self::nop(),
            Opcode::Movi => Self::movi(rd, field),
            _ if field >> 2 != 0 => return Err(bad()),
            _ => Self::rr(op, rd, field),
        })
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            Opcode::Nop => write!(f, "NOP"),
            Opcode::Movi => write!(f, "MOVI R{}, #{}", self.rd, self.imm),
            op => write!(f, "{} R{}, R{}", op.mnemonic(), self.rd, self.rs),
        }
    }
}

fn parse_reg(s: &str) -> Option<u8> {
    let n = s.strip_prefix(['R', 'r'])?.parse::<u8>().ok()?;
    (n < 4).then_some(n)
}

fn parse_imm(s: &str) -> Option<u8> {
    let s = s.strip_prefix('#').unwrap_or(s);
    let v = if let Some(b) = s.strip_prefix("0b") {
        u8::from_str_radix(b, 2).ok()?
    } else if let Some(h) = s.strip_prefix("0x") {
        u8::from_str_radix(h, 16).ok()?
    } else {
        s.parse().ok()?
    };
    (v < 16).then_some(v)
}

/// Parses one instruction per line; `;` starts a comment.
pub fn parse_program(text: &str) -> Result<Vec<Instruction>, DesignError> {
    let mut prog = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let code = raw.split(';').next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let err = |msg: String| DesignError::Asm { line, msg };
        let (mn, rest) = code.split_once(char::is_whitespace).unwrap_or((code, ""));
        let op: Opcode = mn.parse().map_err(err)?;
        let args: Vec<&str> = rest
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .collect();
        let reg = |s: &str| parse_reg(s).ok_or_else(|| err(format!("bad register `{s}`")));
        let ins = match (op, args.as_slice()) {
            (Opcode::Nop, []) => Instruction::nop(),
            (Opcode::Movi, [rd, imm]) => Instruction::movi(
                reg(rd)?,
                parse_imm(imm).ok_or_else(|| err(format!("bad 4-bit immediate `{imm}`")))?,
            ),
            (Opcode::Mov | Opcode::Add | Opcode::Mult, [rd, rs]) => {
                Instruction::rr(op, reg(rd)?, reg(rs)?)
            }
            _ => {
                return Err(err(format!(
                    "wrong operands for {}: `{rest}`",
                    op.mnemonic()
                )))
            }
        };
        prog.push(ins);
    }
    if prog.len() > ROM_WORDS {
        return Err(DesignError::Capacity {
            words: prog.len(),
            max: ROM_WORDS,
        });
    }
    Ok(prog)
}

/// Assembles text into 9-bit words.
pub fn assemble(text: &str) -> Result<Vec<u16>, DesignError> {
    Ok(parse_program(text)?
        .iter()
        .map(Instruction::encode)
        .collect())
}

pub fn disassemble(words: &[u16]) -> Result<String, DesignError> {
    let mut s = String::new();
    for &w in words {
        s.push_str(&Instruction::decode(w)?.to_string());
        s.push('\n');
    }
    Ok(s)
}

/// Sixteen 9-bit words; unused words are NOP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RomImage(pub [u16; ROM_WORDS]);

impl RomImage {
    pub fn from_words(words: &[u16]) -> Result<Self, DesignError> {
        if words.len() > ROM_WORDS {
            return Err(DesignError::Capacity {
                words: words.len(),
                max: ROM_WORDS,
            });
        }
        let mut rom = [0u16; ROM_WORDS];
        for (slot, &w) in rom.iter_mut().zip(words) {
            if w >> ROM_BITS != 0 {
                return Err(DesignError::Decode { word: w });
            }
            *slot = w;
        }
        Ok(Self(rom))
    }

    pub fn from_asm(text: &str) -> Result<Self, DesignError> {
        Self::from_words(&assemble(text)?)
    }

    /// 16 lines of 9 binary digits, most significant first.
    pub fn to_text(&self) -> String {
        self.0.iter().map(|w| format!("{w:09b}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self, DesignError> {
        let mut words = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            if l.len() != ROM_BITS || !l.chars().all(|c| c == '0' || c == '1') {
                return Err(DesignError::Asm {
                    line: i + 1,
                    msg: format!("expected {ROM_BITS} binary digits, got `{l}`"),
                });
            }
            words.push(u16::from_str_radix(l, 2).expect("checked binary"));
        }
        if words.len() != ROM_WORDS {
            return Err(DesignError::Capacity {
                words: words.len(),
                max: ROM_WORDS,
            });
        }
        Self::from_words(&words)
    }

    /// Word `w` as bits, lowest first.
    pub fn bits(&self, w: usize) -> Vec<bool> {
        (0..ROM_BITS).map(|b| self.0[w] >> b & 1 == 1).collect()
    }
}

/// Architectural state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WispState {
    pub pc: u8,
    pub regs: [u8; 4],
    /// Full 8-bit result of the latest MULT.
    pub product: u8,
    pub retired: usize,
    pub rom: RomImage,
}

impl WispState {
    pub fn new(rom: RomImage) -> Self {
        Self {
            pc: 0,
            regs: [0; 4],
            product: 0,
            retired: 0,
            rom,
        }
    }

    /// Executes one instruction.
    pub fn step(&mut self) -> Result<(), DesignError> {
        let ins = Instruction::decode(self.rom.0[self.pc as usize])?;
        let (rd, rs) = (ins.rd as usize, ins.rs as usize);
        match ins.op {
            Opcode::Nop => {}
            Opcode::Mov => self.regs[rd] = self.regs[rs],
            Opcode::Movi => self.regs[rd] = ins.imm,
            Opcode::Add => self.regs[rd] = (self.regs[rd] + self.regs[rs]) & 0xF,
            Opcode::Mult => {
                let p = self.regs[rd] * self.regs[rs];
                self.product = p;
                self.regs[rd] = p & 0xF;
            }
        }
        self.pc = (self.pc + 1) % ROM_WORDS as u8;
        self.retired += 1;
        Ok(())
    }
}

/// Runs `max_cycles` instructions sequentially from PC 0.
pub fn wisp_reference(rom: &RomImage, max_cycles: usize) -> Result<WispState, DesignError> {
    let mut s = WispState::new(*rom);
    for _ in 0..max_cycles {
        s.step()?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings() {
        assert_eq!(assemble("NOP").unwrap(), vec![0]);
        assert_eq!(assemble("MOVI R1, #7").unwrap(), vec![0b010_01_0111]);
        assert_eq!(assemble("mov r0, r3").unwrap(), vec![0b001_00_0011]);
        assert!(matches!(
            assemble("NOP\nMOVI R1, #16"),
            Err(DesignError::Asm { line: 2, .. })
        ));
        assert!(matches!(
            assemble("JMP R1"),
            Err(DesignError::Asm { line: 1, .. })
        ));
        assert!(Instruction::decode(0b101_00_0000).is_err());
    }

    #[test]
    fn reference_semantics() {
        let rom = RomImage::from_asm(
            "MOVI R2, #9\nMOVI R3, #11\nMOV R0, R3\nADD R3, R2\nMOVI R1, #7\nMULT R1, R0",
        )
        .unwrap();
        let s = wisp_reference(&rom, 6).unwrap();
        assert_eq!(s.regs, [11, 13, 9, 4]);
        assert_eq!(s.product, 77);
        assert_eq!(s.pc, 6);
    }

    #[test]
    fn rom_text_round_trip() {
        let rom = RomImage::from_asm("MOVI R0, #3\nADD R0, R0").unwrap();
        let text = rom.to_text();
        assert_eq!(text.lines().count(), 16);
        assert_eq!(RomImage::parse(&text).unwrap(), rom);
    }
}
