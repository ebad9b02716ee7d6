#!/usr/bin/env python3
"""Generate small Pegasus-style DAX v3 workflows.

The job structure of each application follows the published Pegasus
workflow shapes; runtimes (seconds) and file sizes (bytes) are drawn around
typical per-job profiles with a fixed seed so the output is reproducible.

    python3 tools/gen_pegasus_workflows.py data/workflows
"""

import argparse
import pathlib
import random
from xml.sax.saxutils import quoteattr

KB = 1_000
MB = 1_000_000


class Dax:
    def __init__(self, name, rng):
        self.name = name
        self.rng = rng
        self.jobs = []  # (id, name, runtime, uses)
        self.parents = {}  # child id -> list of parent ids

    def job(self, name, runtime, inputs=(), outputs=()):
        jid = "ID%05d" % len(self.jobs)
        jitter = self.rng.uniform(0.8, 1.2)
        uses = [(f, "input", s) for f, s in inputs] + [(f, "output", s) for f, s in outputs]
        self.jobs.append((jid, name, round(runtime * jitter, 2), uses))
        return jid

    def size(self, base):
        return max(1, int(base * self.rng.uniform(0.8, 1.2)))

    def depend(self, child, *parents):
        self.parents.setdefault(child, []).extend(parents)

    def render(self):
        out = ['<?xml version="1.0" encoding="UTF-8"?>',
               '<adag xmlns="http://pegasus.isi.edu/schema/DAX" version="3.6" name=%s jobCount="%d">'
               % (quoteattr(self.name), len(self.jobs))]
        for jid, name, runtime, uses in self.jobs:
            out.append('  <job id="%s" namespace=%s name=%s version="1.0" runtime="%.2f">'
                       % (jid, quoteattr(self.name), quoteattr(name), runtime))
            for f, link, size in uses:
                out.append('    <uses file=%s link="%s" size="%d"/>' % (quoteattr(f), link, size))
            out.append("  </job>")
        for child, parents in self.parents.items():
            out.append('  <child ref="%s">' % child)
            for p in parents:
                out.append('    <parent ref="%s"/>' % p)
            out.append("  </child>")
        out.append("</adag>")
        return "\n".join(out) + "\n"


def cybershake(rng):
    d = Dax("CyberShake", rng)
    sgts = []
    for i in range(2):
        f = ("sgt_%d.sgt" % i, d.size(120 * MB))
        jid = d.job("ExtractSGT", 110, inputs=[("site_%d.grm" % i, d.size(400 * MB))], outputs=[f])
        sgts.append((jid, f))
    seis, peaks = [], []
    for i in range(13):
        src, f = sgts[i % 2]
        sf = ("seis_%d.grm" % i, d.size(24 * KB))
        s = d.job("SeismogramSynthesis", 39, inputs=[f], outputs=[sf])
        d.depend(s, src)
        pf = ("peak_%d.bsa" % i, d.size(216))
        p = d.job("PeakValCalcOkaya", 0.6, inputs=[sf], outputs=[pf])
        d.depend(p, s)
        seis.append((s, sf))
        peaks.append((p, pf))
    zs = d.job("ZipSeis", 35, inputs=[f for _, f in seis], outputs=[("seis.zip", d.size(300 * KB))])
    d.depend(zs, *[j for j, _ in seis])
    zp = d.job("ZipPSA", 0.3, inputs=[f for _, f in peaks], outputs=[("psa.zip", d.size(3 * KB))])
    d.depend(zp, *[j for j, _ in peaks])
    return d


def montage(rng):
    d = Dax("Montage", rng)
    proj = []
    for i in range(5):
        f = ("p_%d.fits" % i, d.size(8 * MB))
        j = d.job("mProjectPP", 1.7, inputs=[("raw_%d.fits" % i, d.size(4 * MB))], outputs=[f])
        proj.append((j, f))
    pairs = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (0, 3), (1, 4)]
    diffs = []
    for a, b in pairs:
        f = ("diff_%d_%d.fits" % (a, b), d.size(300 * KB))
        j = d.job("mDiffFit", 0.7, inputs=[proj[a][1], proj[b][1]], outputs=[f])
        d.depend(j, proj[a][0], proj[b][0])
        diffs.append((j, f))
    fits = ("fits.tbl", d.size(20 * KB))
    cf = d.job("mConcatFit", 14, inputs=[f for _, f in diffs], outputs=[fits])
    d.depend(cf, *[j for j, _ in diffs])
    corr = ("corrections.tbl", d.size(5 * KB))
    bg = d.job("mBgModel", 38, inputs=[fits], outputs=[corr])
    d.depend(bg, cf)
    backs = []
    for i, (pj, pf) in enumerate(proj):
        f = ("c_%d.fits" % i, d.size(8 * MB))
        j = d.job("mBackground", 1.7, inputs=[pf, corr], outputs=[f])
        d.depend(j, pj, bg)
        backs.append((j, f))
    tbl = ("images.tbl", d.size(4 * KB))
    it = d.job("mImgtbl", 2.8, inputs=[f for _, f in backs], outputs=[tbl])
    d.depend(it, *[j for j, _ in backs])
    mosaic = ("mosaic.fits", d.size(40 * MB))
    add = d.job("mAdd", 28, inputs=[tbl] + [f for _, f in backs], outputs=[mosaic])
    d.depend(add, it, *[j for j, _ in backs])
    small = ("shrunken.fits", d.size(2 * MB))
    sh = d.job("mShrink", 6.6, inputs=[mosaic], outputs=[small])
    d.depend(sh, add)
    jp = d.job("mJPEG", 0.7, inputs=[small], outputs=[("mosaic.jpg", d.size(200 * KB))])
    d.depend(jp, sh)
    return d


def epigenomics(rng):
    d = Dax("Epigenomics", rng)
    chunks = [("chunk_%d.sfq" % i, d.size(20 * MB)) for i in range(5)]
    split = d.job("fastqSplit", 34, inputs=[("reads.sfq", d.size(100 * MB))], outputs=chunks)
    maps = []
    for i, chunk in enumerate(chunks):
        prev, pf = split, chunk
        for stage, rt, size in (("filterContams", 2.5, 20 * MB), ("sol2sanger", 0.5, 18 * MB),
                                ("fastq2bfq", 1.4, 6 * MB)):
            f = ("%s_%d.out" % (stage, i), d.size(size))
            j = d.job(stage, rt, inputs=[pf], outputs=[f])
            d.depend(j, prev)
            prev, pf = j, f
        mf = ("map_%d.map" % i, d.size(1 * MB))
        m = d.job("map", 200, inputs=[pf, ("reference.bfa", d.size(5 * MB))], outputs=[mf])
        d.depend(m, prev)
        maps.append((m, mf))
    merged = ("merged.map", d.size(5 * MB))
    mm = d.job("mapMerge", 11, inputs=[f for _, f in maps], outputs=[merged])
    d.depend(mm, *[j for j, _ in maps])
    index = ("merged.idx", d.size(5 * MB))
    mi = d.job("maqIndex", 43, inputs=[merged], outputs=[index])
    d.depend(mi, mm)
    pu = d.job("pileup", 55, inputs=[index], outputs=[("pileup.out", d.size(80 * MB))])
    d.depend(pu, mi)
    return d


def ligo(rng):
    d = Dax("LIGO", rng)
    for g in range(2):
        width = 3 if g == 0 else 2
        banks, insp = [], []
        for i in range(width):
            bf = ("bank_%d_%d.xml" % (g, i), d.size(500 * KB))
            b = d.job("TmpltBank", 18, inputs=[("frame_%d_%d.gwf" % (g, i), d.size(30 * MB))], outputs=[bf])
            banks.append((b, bf))
        for i, (b, bf) in enumerate(banks):
            f = ("insp1_%d_%d.xml" % (g, i), d.size(300 * KB))
            j = d.job("Inspiral", 46, inputs=[bf, ("frame_%d_%d.gwf" % (g, i), d.size(30 * MB))], outputs=[f])
            d.depend(j, b)
            insp.append((j, f))
        tf = ("thinca1_%d.xml" % g, d.size(100 * KB))
        th = d.job("Thinca", 5.4, inputs=[f for _, f in insp], outputs=[tf])
        d.depend(th, *[j for j, _ in insp])
        insp2 = []
        for i in range(width):
            tb = ("trigbank_%d_%d.xml" % (g, i), d.size(20 * KB))
            t = d.job("TrigBank", 0.2, inputs=[tf], outputs=[tb])
            d.depend(t, th)
            f = ("insp2_%d_%d.xml" % (g, i), d.size(300 * KB))
            j = d.job("Inspiral", 46, inputs=[tb, ("frame_%d_%d.gwf" % (g, i), d.size(30 * MB))], outputs=[f])
            d.depend(j, t)
            insp2.append((j, f))
        th2 = d.job("Thinca", 5.4, inputs=[f for _, f in insp2], outputs=[("thinca2_%d.xml" % g, d.size(100 * KB))])
        d.depend(th2, *[j for j, _ in insp2])
    return d


def sipht(rng):
    d = Dax("SIPHT", rng)
    patsers = []
    for i in range(18):
        f = ("patser_%d.out" % i, d.size(2 * KB))
        j = d.job("Patser", 0.96, inputs=[("matrix_%d.pwm" % i, d.size(1 * KB)), ("genome.ffn", d.size(2 * MB))],
                  outputs=[f])
        patsers.append((j, f))
    pc_out = ("patser.concat", d.size(36 * KB))
    pc = d.job("Patser_concate", 0.03, inputs=[f for _, f in patsers], outputs=[pc_out])
    d.depend(pc, *[j for j, _ in patsers])
    upstream = []
    for name, rt, size in (("Transterm", 32, 50 * KB), ("Findterm", 59, 400 * KB), ("RNAMotif", 25, 20 * KB),
                           ("Blast", 331, 600 * KB)):
        f = ("%s.out" % name.lower(), d.size(size))
        upstream.append((d.job(name, rt, inputs=[("genome.fna", d.size(5 * MB))], outputs=[f]), f))
    srna_out = ("srna.out", d.size(100 * KB))
    srna = d.job("SRNA", 12, inputs=[f for _, f in upstream], outputs=[srna_out])
    d.depend(srna, *[j for j, _ in upstream])
    ffn_out = ("srna.ffn", d.size(50 * KB))
    ffn = d.job("FFN_parse", 0.7, inputs=[srna_out], outputs=[ffn_out])
    d.depend(ffn, srna)
    blasts = []
    for name, rt in (("Blast_synteny", 3.4), ("Blast_candidate", 0.6), ("Blast_QRNA", 44), ("Blast_paralogues", 0.7)):
        f = ("%s.out" % name.lower(), d.size(30 * KB))
        j = d.job(name, rt, inputs=[ffn_out], outputs=[f])
        d.depend(j, ffn)
        blasts.append((j, f))
    ann = d.job("SRNA_annotate", 0.14, inputs=[pc_out, srna_out] + [f for _, f in blasts],
                outputs=[("annotation.out", d.size(40 * KB))])
    d.depend(ann, pc, srna, *[j for j, _ in blasts])
    return d


GENERATORS = {
    "cybershake": cybershake,
    "montage": montage,
    "epigenomics": epigenomics,
    "ligo": ligo,
    "sipht": sipht,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for i, (key, gen) in enumerate(GENERATORS.items()):
        dax = gen(random.Random(args.seed * 100 + i))
        path = args.out_dir / ("%s_%d.xml" % (key, len(dax.jobs)))
        path.write_text(dax.render())
        print(path, len(dax.jobs), "jobs")


if __name__ == "__main__":
    main()
