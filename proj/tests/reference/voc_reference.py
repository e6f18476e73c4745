#!/usr/bin/env python3
"""Independent VOC-style evaluation used to produce the golden metrics files.

Writes tests/reference/golden/{detections,annotations}/ and expected.csv.
Regenerate with: python3 tests/reference/voc_reference.py
"""

import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "golden")
CLASSES = ["hotspot", "panel", "strong_soiling"]
THRESHOLDS = [0.3, 0.5, 0.7]
W, H = 320, 256


def rand_box(rng):
    w, h = rng.randint(4, 60), rng.randint(4, 60)
    x, y = rng.randint(0, W - w), rng.randint(0, H - h)
    return [x, y, x + w, y + h]


def jitter(rng, b):
    while True:
        d = [rng.randint(-6, 6) for _ in range(4)]
        c = [max(0, b[0] + d[0]), max(0, b[1] + d[1]), min(W, b[2] + d[2]), min(H, b[3] + d[3])]
        if c[2] > c[0] and c[3] > c[1]:
            return c


def iou(a, b):
    iw = min(a[2], b[2]) - max(a[0], b[0])
    ih = min(a[3], b[3]) - max(a[1], b[1])
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = float(iw * ih)
    union = float((a[2] - a[0]) * (a[3] - a[1])) + float((b[2] - b[0]) * (b[3] - b[1])) - inter
    return inter / union


def make_scenes(seed=20240611, n_images=40):
    rng = random.Random(seed)
    used_conf = set()

    def conf():
        while True:
            c = rng.randint(1, 999999)
            if c not in used_conf:
                used_conf.add(c)
                return c / 1e6

    scenes = []
    for i in range(n_images):
        gts, dets = [], []
        for _ in range(rng.randint(0, 6)):
            label = rng.choice(CLASSES)
            box = rand_box(rng)
            gts.append((label, box))
            r = rng.random()
            if r < 0.7:
                dets.append((label, conf(), jitter(rng, box)))
            if r < 0.15:
                dets.append((label, conf(), jitter(rng, box)))  # duplicate
        for _ in range(rng.randint(0, 3)):
            dets.append((rng.choice(CLASSES), conf(), rand_box(rng)))  # clutter
        has_csv = rng.random() > 0.1
        scenes.append({"id": "img_%03d" % i, "gts": gts, "dets": dets if has_csv else None})
    return scenes


def match_image(dets, gts, thr, label):
    g = [b for (l, b) in gts if l == label]
    d = sorted([(c, b) for (l, c, b) in dets if l == label], key=lambda x: -x[0])
    taken = [False] * len(g)
    out = []
    for c, b in d:
        best, best_j = -1.0, -1
        for j, gb in enumerate(g):
            if taken[j]:
                continue
            v = iou(b, gb)
            if v > best:
                best, best_j = v, j
        if best_j >= 0 and best >= thr:
            taken[best_j] = True
            out.append((c, True))
        else:
            out.append((c, False))
    return out, len(g)


def ap_all_point(flags, n_gt):
    if n_gt == 0:
        return 0.0
    tp = fp = 0
    rec, prec = [], []
    for f in flags:
        tp += f
        fp += not f
        rec.append(tp / n_gt)
        prec.append(tp / (tp + fp))
    mrec = [0.0] + rec + [1.0]
    mpre = [0.0] + prec + [0.0]
    for i in range(len(mpre) - 2, -1, -1):
        mpre[i] = max(mpre[i], mpre[i + 1])
    return sum((mrec[i + 1] - mrec[i]) * mpre[i + 1] for i in range(len(mrec) - 1))


def prf(tp, fp, fn):
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def evaluate(scenes):
    rows = []
    for thr in THRESHOLDS:
        aps = []
        for label in CLASSES:
            ranked, n_gt = [], 0
            for s in scenes:
                m, n = match_image(s["dets"] or [], s["gts"], thr, label)
                ranked += m
                n_gt += n
            ranked.sort(key=lambda x: -x[0])
            flags = [f for (_, f) in ranked]
            tp = sum(flags)
            fp = len(flags) - tp
            fn = n_gt - tp
            p, r, f = prf(tp, fp, fn)
            ap = ap_all_point(flags, n_gt)
            aps.append(ap)
            rows.append("%s,%.2f,%d,%d,%d,%.12f,%.12f,%.12f,%.12f" % (label, thr, tp, fp, fn, p, r, f, ap))
        rows.append("mAP,%.2f,,,,,,,%.12f" % (thr, sum(aps) / len(aps)))
    return rows


def write(scenes):
    os.makedirs(os.path.join(OUT, "detections"), exist_ok=True)
    os.makedirs(os.path.join(OUT, "annotations"), exist_ok=True)
    for s in scenes:
        objs = "".join(
            "  <object>\n    <name>%s</name>\n    <bndbox>\n      <xmin>%d</xmin>\n      <ymin>%d</ymin>\n"
            "      <xmax>%d</xmax>\n      <ymax>%d</ymax>\n    </bndbox>\n  </object>\n" % (l, *b)
            for (l, b) in s["gts"])
        with open(os.path.join(OUT, "annotations", s["id"] + ".xml"), "w") as f:
            f.write("<annotation>\n  <filename>%s.tiff</filename>\n  <size>\n    <width>%d</width>\n"
                    "    <height>%d</height>\n    <depth>1</depth>\n  </size>\n%s</annotation>\n"
                    % (s["id"], W, H, objs))
        if s["dets"] is not None:
            with open(os.path.join(OUT, "detections", s["id"] + ".csv"), "w") as f:
                for (l, c, b) in s["dets"]:
                    f.write("%s,%.6f,%.6f,%.6f,%.6f,%.6f\n" % (l, c, *b))
    with open(os.path.join(OUT, "expected.csv"), "w") as f:
        f.write("class,iou,tp,fp,fn,prec,rec,f1,ap\n")
        f.write("\n".join(evaluate(scenes)) + "\n")


if __name__ == "__main__":
    write(make_scenes())
