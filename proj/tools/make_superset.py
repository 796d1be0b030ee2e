#!/usr/bin/env python3
"""Writes data/superset.xml, the reviewed requirement/testcase fixture.

Every requirement has at least one testcase with the same applicability, so
no configuration leaves a derived requirement without verification unless an
approved waiver covers the gap.
"""
import sys
from pathlib import Path
from xml.sax.saxutils import quoteattr, escape

ANY = "true"
INCR4 = 'ahb_bursts has "incr4"'
INCR8 = 'ahb_bursts has "incr8"'
ANY_BURST = f"{INCR4} || {INCR8}"
RET = 'lp_modes has "retention"'
SHUT = 'lp_modes has "shutdown"'
ANY_LP = f"{RET} || {SHUT}"

# (key, title, text, applicability)
HWRQS = [
    ("bus_single", "AHB single transfers", "The bus interface shall accept single-beat read and write transfers and return okay for in-range addresses.", ANY),
    ("bus_range", "Out-of-range access error", "Any transfer with a beat beyond the last word shall complete with an error response.", ANY),
    ("bus_side_effect", "Error responses are side-effect free", "A transfer answered with error shall leave the memory array unchanged.", ANY),
    ("bus_idle", "Idle transfers", "Idle transfers shall complete with okay and carry no data.", ANY),
    ("bus_incr4", "INCR4 bursts", "When configured, four-beat incrementing bursts shall access consecutive words.", INCR4),
    ("bus_incr8", "INCR8 bursts", "When configured, eight-beat incrementing bursts shall access consecutive words.", INCR8),
    ("bus_burst_cross", "Bursts across 8-word boundaries", "Incrementing bursts shall continue linearly across 8-word boundaries.", ANY_BURST),
    ("bus_burst_range", "Burst range checking", "A burst whose last beat exceeds the array shall be rejected as a whole.", ANY_BURST),
    ("bus_unconfigured", "Unconfigured burst types", "Burst types that are not configured shall be answered with error.", "true"),
    ("addr_small", "Address decode for small arrays", "Arrays of up to 1024 words shall decode every word address.", "addr_words <= 1024"),
    ("addr_large", "Address decode for large arrays", "Arrays above 1024 words shall decode every word address.", "addr_words > 1024"),
    ("mem_integrity", "Full-width data integrity", "Every data bit written shall be returned unchanged by a later read.", ANY),
    ("mem_init", "Defined reset contents", "After reset every word shall read as zero without error flags.", ANY),
    ("ecc_none", "Unprotected data path", "Without EDC/ECC the stored word shall equal the written data and faults pass through.", 'ecc == none'),
    ("ecc_sed_gen", "Parity generation", "With SED a single parity bit shall be stored with every word.", 'ecc == sed'),
    ("ecc_sed_detect", "Single error detection", "With SED any single-bit error shall be flagged as detected.", 'ecc == sed'),
    ("ecc_sec", "Single error correction", "With SECDED or DECTED any single-bit error shall be corrected transparently.", 'ecc >= secded'),
    ("ecc_ded", "Double error detection", "With SECDED any double-bit error shall be flagged uncorrectable.", 'ecc == secded'),
    ("ecc_dec", "Double error correction", "With DECTED any double-bit error shall be corrected.", 'ecc == dected'),
    ("ecc_ted", "Triple error detection", "With DECTED any triple-bit error shall be flagged uncorrectable.", 'ecc == dected'),
    ("ecc_flags", "ECC status reporting", "Every read beat shall report ok, corrected or detected_uncorrectable.", 'ecc != none'),
    ("ecc_counters", "Error event counters", "Corrected and detected events shall be counted.", 'ecc >= secded'),
    ("ecc_w32", "32-bit protected words", "Protection shall cover all 32 data bits at the widest configuration.", 'ecc >= sed && data_width == 32'),
    ("ecc_w8", "8-bit protected words", "Protection shall cover all 8 data bits at the narrowest configuration.", 'ecc >= sed && data_width == 8'),
    ("lp_ret_enter", "Retention mode entry and exit", "When configured, the subsystem shall enter and leave retention on request.", RET),
    ("lp_ret_keep", "Retention keeps contents", "Data written before retention shall read back unchanged afterwards.", RET),
    ("lp_shut_enter", "Shutdown mode entry and exit", "When configured, the subsystem shall enter and leave shutdown on request.", SHUT),
    ("lp_shut_inval", "Shutdown invalidates contents", "Leaving shutdown shall leave every word in the invalidation pattern.", SHUT),
    ("lp_block", "Accesses blocked in low power", "Reads and writes in a low-power mode shall be answered with error.", ANY_LP),
    ("lp_reject", "Unsupported power modes rejected", "Requests for low-power modes that are not configured shall be rejected.", f'!({RET} && {SHUT})'),
    ("tech_hd", "SRAM HD access latency", "High-density SRAM shall answer reads and writes in two cycles per beat.", 'tech == sram_hd'),
    ("tech_hs", "SRAM HS access latency", "High-speed SRAM shall answer reads and writes in one cycle per beat.", 'tech == sram_hs'),
    ("tech_rram", "RRAM access latency", "RRAM shall answer reads in three and writes in five cycles per beat.", 'tech == rram'),
    ("tech_rram_burst", "RRAM burst write throughput", "RRAM burst writes shall sustain the per-beat write latency.", 'tech == rram'),
]

# (title, domain, applicability, verified requirement keys)
TESTCASES = [
    ("Random single read/write traffic", "simulation", ANY, ["bus_single", "mem_integrity"]),
    ("Random traffic near the top of memory", "simulation", ANY, ["bus_range", "bus_side_effect"]),
    ("Bus decode response rules", "formal", ANY, ["bus_single", "bus_range", "bus_side_effect", "bus_idle", "bus_unconfigured"]),
    ("Bus decode idle transfers", "formal", ANY, ["bus_idle"]),
    ("Random traffic with idle cycles", "simulation", ANY, ["bus_idle", "mem_integrity"]),
    ("Single-beat burst edges", "simulation", ANY, ["bus_range", "bus_single"]),
    ("INCR4 burst read-back", "simulation", INCR4, ["bus_incr4"]),
    ("INCR4 bus decode", "formal", INCR4, ["bus_incr4", "bus_burst_range"]),
    ("INCR8 burst read-back", "simulation", INCR8, ["bus_incr8"]),
    ("INCR8 bus decode", "formal", INCR8, ["bus_incr8", "bus_burst_range"]),
    ("Burst boundary crossing", "simulation", ANY_BURST, ["bus_burst_cross"]),
    ("Burst beyond last word", "simulation", ANY_BURST, ["bus_burst_range"]),
    ("Bus decode for unconfigured burst types", "formal", ANY, ["bus_unconfigured"]),
    ("Small array random addressing", "simulation", "addr_words <= 1024", ["addr_small"]),
    ("Small array bus decode", "formal", "addr_words <= 1024", ["addr_small"]),
    ("Large array random addressing", "simulation", "addr_words > 1024", ["addr_large"]),
    ("Large array bus decode", "formal", "addr_words > 1024", ["addr_large"]),
    ("Full-width data patterns", "simulation", ANY, ["mem_integrity"]),
    ("Burst data integrity", "simulation", ANY, ["mem_integrity"]),
    ("Reset contents read-back", "simulation", ANY, ["mem_init"]),
    ("Unprotected fault pass-through", "simulation", "ecc == none", ["ecc_none"]),
    ("Unprotected random traffic", "simulation", "ecc == none", ["ecc_none"]),
    ("SED parity EDC proof", "formal", "ecc == sed", ["ecc_sed_gen", "ecc_sed_detect"]),
    ("SED fault injection", "simulation", "ecc == sed", ["ecc_sed_detect", "ecc_sed_gen"]),
    ("SECDED/DECTED single-error ECC proof", "formal", "ecc >= secded", ["ecc_sec"]),
    ("Single-bit fault injection", "simulation", "ecc >= secded", ["ecc_sec", "ecc_counters"]),
    ("SECDED double-error ECC proof", "formal", "ecc == secded", ["ecc_ded"]),
    ("SECDED double-bit fault injection", "simulation", "ecc == secded", ["ecc_ded"]),
    ("DECTED double-error ECC proof", "formal", "ecc == dected", ["ecc_dec"]),
    ("DECTED triple-error ECC proof", "formal", "ecc == dected", ["ecc_ted"]),
    ("DECTED multi-bit fault injection", "simulation", "ecc == dected", ["ecc_dec", "ecc_ted"]),
    ("ECC flag reporting", "simulation", "ecc != none", ["ecc_flags"]),
    ("EDC capability table proof", "formal", "ecc != none", ["ecc_flags"]),
    ("Fault counter accounting", "simulation", "ecc >= secded", ["ecc_counters"]),
    ("ECC proof at 32-bit width", "formal", "ecc >= sed && data_width == 32", ["ecc_w32"]),
    ("32-bit fault injection", "simulation", "ecc >= sed && data_width == 32", ["ecc_w32"]),
    ("ECC proof at 8-bit width", "formal", "ecc >= sed && data_width == 8", ["ecc_w8"]),
    ("8-bit fault injection", "simulation", "ecc >= sed && data_width == 8", ["ecc_w8"]),
    ("Retention power cycling", "simulation", RET, ["lp_ret_enter", "lp_ret_keep"]),
    ("Retention data preservation", "simulation", RET, ["lp_ret_keep"]),
    ("Retention bus decode", "formal", RET, ["lp_ret_enter", "lp_block"]),
    ("Shutdown power cycling", "simulation", SHUT, ["lp_shut_enter", "lp_shut_inval"]),
    ("Shutdown invalidation check", "simulation", SHUT, ["lp_shut_inval"]),
    ("Shutdown bus decode", "formal", SHUT, ["lp_shut_enter", "lp_block"]),
    ("Low-power access blocking", "simulation", ANY_LP, ["lp_block"]),
    ("Power mode request rejection", "simulation", f'!({RET} && {SHUT})', ["lp_reject"]),
    ("Power-aware random traffic", "simulation", ANY_LP, ["lp_block"]),
    ("SRAM HD random traffic latency", "simulation", "tech == sram_hd", ["tech_hd"]),
    ("SRAM HD burst latency", "simulation", "tech == sram_hd", ["tech_hd"]),
    ("SRAM HD bus decode latency", "formal", "tech == sram_hd", ["tech_hd"]),
    ("SRAM HS random traffic latency", "simulation", "tech == sram_hs", ["tech_hs"]),
    ("SRAM HS burst latency", "simulation", "tech == sram_hs", ["tech_hs"]),
    ("SRAM HS bus decode latency", "formal", "tech == sram_hs", ["tech_hs"]),
    ("RRAM random traffic latency", "simulation", "tech == rram && data_width >= 16", ["tech_rram"]),
    ("RRAM bus decode latency", "formal", "tech == rram && data_width >= 16", ["tech_rram"]),
    ("RRAM burst write stress", "simulation", f"tech == rram && ({ANY_BURST})", ["tech_rram_burst"]),
    ("RRAM power cycling", "simulation", f"tech == rram && ({ANY_LP})", ["tech_rram", "lp_block"]),
    ("RRAM fault injection", "simulation", "tech == rram && ecc != none", ["tech_rram", "ecc_flags"]),
    ("Mixed burst and single traffic", "simulation", ANY_BURST, ["bus_single", "bus_incr4", "bus_incr8"]),
    ("Wide-word random traffic", "simulation", "data_width >= 16", ["mem_integrity"]),
    ("Narrow-word random traffic", "simulation", "data_width == 8", ["mem_integrity"]),
    ("Fault sweep with scrubbing", "simulation", ANY, ["mem_integrity"]),
]

# (title, text, applicability, waived requirement key)
WAIVERS = [
    ("RRAM 8-bit latency covered by macro characterisation",
     "The 8-bit RRAM macro is characterised by the technology provider; no separate latency test.",
     "tech == rram && data_width == 8", "tech_rram"),
    ("RRAM single-beat-only configurations",
     "Without incrementing bursts the burst throughput requirement reduces to single-beat latency.",
     f"tech == rram && !({ANY_BURST})", "tech_rram_burst"),
]

HISTORY = "draft,in_review,approved"


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "superset.xml"
    hwrq_id = {key: f"HWRQ-{i:03d}" for i, (key, *_rest) in enumerate(HWRQS, 1)}
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', '<rmt-store version="1">',
             f'  <sequence hwrq="{len(HWRQS)}" testcase="{len(TESTCASES)}" waiver="{len(WAIVERS)}"/>']

    def item(attrs: dict, title: str, text: str) -> None:
        a = " ".join(f"{k}={quoteattr(v)}" for k, v in attrs.items())
        lines.append(f"  <item {a}>")
        lines.append(f"    <title>{escape(title)}</title>")
        lines.append(f"    <text>{escape(text)}</text>")
        lines.append(f"    <history>{HISTORY}</history>")
        lines.append("  </item>")

    for key, title, text, pred in HWRQS:
        item({"id": hwrq_id[key], "kind": "hwrq", "state": "approved", "applicability": pred}, title, text)
    rels = []
    for i, (title, domain, pred, verifies) in enumerate(TESTCASES, 1):
        tc = f"TC-{i:03d}"
        item({"id": tc, "kind": "testcase", "state": "approved", "domain": domain, "applicability": pred},
             title, f"Verifies: {', '.join(hwrq_id[k] for k in verifies)}.")
        rels += [(tc, hwrq_id[k], "verifies") for k in verifies]
    for i, (title, text, pred, target) in enumerate(WAIVERS, 1):
        wid = f"WVR-{i:03d}"
        item({"id": wid, "kind": "waiver", "state": "approved", "applicability": pred, "target": hwrq_id[target]},
             title, text)
        rels.append((wid, hwrq_id[target], "waives"))
    for frm, to, kind in sorted(rels):
        lines.append(f'  <rel from="{frm}" to="{to}" kind="{kind}"/>')
    lines.append("</rmt-store>")
    out.write_text("\n".join(lines) + "\n")
    print(f"{out}: {len(HWRQS)} hwrqs, {len(TESTCASES)} testcases, {len(WAIVERS)} waivers")
    return 0


if __name__ == "__main__":
    sys.exit(main())
