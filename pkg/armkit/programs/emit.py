"""Write programs back out as DSL text the CLI can run, trace and diff."""
import json
import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

from armkit.automata.automaton import dump_automaton
from armkit.errors import GenerationError
from armkit.machine.parser import format_instruction
from armkit.machine.program import Program
from armkit.programs.builtins import key_of

logger = logging.getLogger(__name__)

# characters the automaton text format cannot carry
_UNWRITABLE = set(" \t,;()")


def render_program(p: Program) -> Tuple[str, Dict[str, str]]:
    """DSL text plus automaton files for the operations that are not builtins.

    Files are named `<op>.aut` and referenced relative to the program file.
    """
    header = [f"; {p.name or 'program'}", f"machine {p.kind.value}",
              f"alphabet {json.dumps(''.join(sorted(p.alphabet)))}",
              f"input {json.dumps(''.join(sorted(p.input_alphabet)))}",
              f"registers {p.register_count}"]
    files: Dict[str, str] = {}
    for name in sorted(p.registry):
        op = p.registry[name]
        key = key_of(op)
        if key is not None:
            header.append(f"use {name} = builtin({key})")
            continue
        bad = _UNWRITABLE & set(op.automaton.alphabet)
        if bad:
            raise GenerationError(f"operation {name!r} uses {''.join(sorted(bad))!r}, "
                                  "which the automaton file format cannot hold")
        filename = f"{name}.aut"
        files[filename] = dump_automaton(op.automaton)
        header.append(f"use {name} = file({json.dumps(filename)})")
    body = [f"{p.tag(line)}: {format_instruction(p.lines[line])}" for line in p.line_numbers]
    return "\n".join(header + body) + "\n", files


def emit_program(p: Program, directory: Path, filename: Optional[str] = None) -> Path:
    """Write p (and its non-builtin automata) into directory; returns the program path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    text, files = render_program(p)
    for name, content in files.items():
        (directory / name).write_text(content, encoding="utf-8")
    target = directory / (filename or f"{p.name or 'program'}.arm")
    target.write_text(text, encoding="utf-8")
    logger.info("emitted %s with %d automaton files", target, len(files))
    return target
