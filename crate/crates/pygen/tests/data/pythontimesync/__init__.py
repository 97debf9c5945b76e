"""Test double of the pythontimesync runtime.

Implements only what generated applications touch: the Component, Behavior
and Factory bases and main(), with the interpreter's tick rule.
"""

import json
import sys


class Behavior:
    pass


class Factory:
    pass


class Component:
    def __init__(self, name, in_ports, out_ports):
        self.name = name
        self.in_ports = dict(in_ports)
        self.out_ports = dict(out_ports)
        self.children = {}
        self.connectors = []

    def add_child(self, name, child):
        self.children[name] = child

    def connect(self, src_instance, src_port, tgt_instance, tgt_port):
        self.connectors.append(((src_instance, src_port), (tgt_instance, tgt_port)))


def _flatten(comp, path, atomics, routes):
    for (si, sp), (ti, tp) in comp.connectors:
        src = (path + ((si,) if si else ()), sp)
        tgt = (path + ((ti,) if ti else ()), tp)
        routes.setdefault(src, []).append(tgt)
    if hasattr(comp, "compute"):
        atomics.append((path, comp))
    for name, child in comp.children.items():
        _flatten(child, path + (name,), atomics, routes)


def run(root, stimulus, ticks):
    atomics, routes = [], {}
    _flatten(root, (), atomics, routes)
    in_flight, out = {}, []
    for t in range(ticks):
        present, in_flight = in_flight, {}
        for port, value in (stimulus[t] if t < len(stimulus) else {}).items():
            present[((), port)] = value
        emitted = {}
        for path, comp in atomics:
            inputs = {p: present[(path, p)] for p in comp.in_ports if (path, p) in present}
            for port, value in comp.compute(inputs).items():
                emitted[(path, port)] = value
        present.update(emitted)
        out.append({p: present[((), p)] for p in root.out_ports if ((), p) in present})
        for src, value in present.items():
            for tgt in routes.get(src, ()):
                in_flight[tgt] = value
    return out


def main(create_root):
    stimulus_path, ticks, output_path = sys.argv[1], int(sys.argv[2]), sys.argv[3]
    with open(stimulus_path, encoding="utf-8") as f:
        stimulus = [json.loads(line) for line in f.read().splitlines()]
    trace = run(create_root(), stimulus, ticks)
    with open(output_path, "w", encoding="utf-8") as f:
        for tick in trace:
            f.write(json.dumps(tick, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")
