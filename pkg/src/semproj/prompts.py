"""Guiding prompts: templated questions with constrained answer slots.

A template holds one `{slot}` placeholder per slot; rendering expands each
into the "<a | b | c>" vocabulary enumeration. Parsing scans a classifier
answer for the first whole-word vocabulary hit per slot, consuming matched
spans so one word cannot satisfy two slots.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidPrompt, ParseFailure

UNKNOWN = "unknown"


@dataclass(frozen=True)
class SlotSpec:
    name: str
    vocabulary: tuple[str, ...]

    def __post_init__(self):
        if not self.vocabulary:
            raise InvalidPrompt(f"slot {self.name!r} has an empty vocabulary")
        object.__setattr__(self, "vocabulary", tuple(self.vocabulary))


@dataclass(frozen=True)
class GuidingPrompt:
    template: str
    slots: tuple[SlotSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if not self.slots:
            raise InvalidPrompt("a guiding prompt needs at least one slot")
        names = [s.name for s in self.slots]
        if len(names) != len(set(names)):
            raise InvalidPrompt("slot names must be unique")
        for slot in self.slots:
            if len(slot.vocabulary) < 2:
                raise InvalidPrompt(f"slot {slot.name!r} needs at least 2 vocabulary entries")
            lowered = [v.lower() for v in slot.vocabulary]
            if len(lowered) != len(set(lowered)):
                raise InvalidPrompt(f"slot {slot.name!r} has case-colliding vocabulary entries")
            if self.template.count("{" + slot.name + "}") != 1:
                raise InvalidPrompt(
                    f"template must reference {{{slot.name}}} exactly once"
                )

    def slot_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    def to_json(self) -> dict[str, Any]:
        return {
            "template": self.template,
            "slots": [{"name": s.name, "vocabulary": list(s.vocabulary)} for s in self.slots],
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "GuidingPrompt":
        return cls(
            template=doc["template"],
            slots=tuple(SlotSpec(s["name"], tuple(s["vocabulary"])) for s in doc["slots"]),
        )


def render_prompt(prompt: GuidingPrompt) -> str:
    """Expand each slot placeholder into its vocabulary enumeration."""
    text = prompt.template
    for slot in prompt.slots:
        text = text.replace("{" + slot.name + "}", "<" + " | ".join(slot.vocabulary) + ">")
    return text


def prompt_hash(prompt: GuidingPrompt) -> str:
    return hashlib.sha256(render_prompt(prompt).encode("utf-8")).hexdigest()[:16]


def _whole_word_matches(raw: str, entry: str) -> list[tuple[int, int]]:
    """Spans where `entry` occurs case-insensitively with non-alphanumeric
    (or string-edge) characters on both sides."""
    spans = []
    for m in re.finditer(re.escape(entry), raw, flags=re.IGNORECASE):
        s, e = m.span()
        if s > 0 and raw[s - 1].isalnum():
            continue
        if e < len(raw) and raw[e].isalnum():
            continue
        spans.append((s, e))
    return spans


def parse_label(raw: str, prompt: GuidingPrompt, strict: bool = False) -> dict[str, str]:
    """Slot values extracted from a classifier answer.

    Slots are resolved in declaration order; each takes the leftmost
    unconsumed whole-word vocabulary hit (longest entry wins position ties)
    and marks its span consumed. Unmatched slots become "unknown", or raise
    in strict mode.
    """
    consumed: list[tuple[int, int]] = []
    values: dict[str, str] = {}
    for slot in prompt.slots:
        best: tuple[int, int, str] | None = None  # (start, -length, entry)
        for entry in slot.vocabulary:
            for s, e in _whole_word_matches(raw, entry):
                if any(s < ce and cs < e for cs, ce in consumed):
                    continue
                cand = (s, -(e - s), entry)
                if best is None or cand[:2] < best[:2]:
                    best = cand
                break  # only the leftmost span per entry matters
        if best is None:
            if strict:
                raise ParseFailure(slot.name, raw)
            values[slot.name] = UNKNOWN
        else:
            start, neg_len, entry = best
            consumed.append((start, start - neg_len))
            values[slot.name] = entry
    return values


@dataclass(frozen=True)
class TextLabel:
    """A parsed classifier answer for one sample."""

    sample_id: str
    raw_text: str
    slot_values: dict[str, str] = field(default_factory=dict)
    parse_ok: bool = True

    def to_json(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "raw_text": self.raw_text,
            "slot_values": dict(self.slot_values),
            "parse_ok": self.parse_ok,
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "TextLabel":
        return cls(
            sample_id=doc["sample_id"],
            raw_text=doc["raw_text"],
            slot_values=dict(doc["slot_values"]),
            parse_ok=bool(doc["parse_ok"]),
        )


def label_from_answer(
    sample_id: str, answer: str, prompt: GuidingPrompt, strict: bool = False
) -> TextLabel:
    values = parse_label(answer, prompt, strict=strict)
    return TextLabel(
        sample_id=sample_id,
        raw_text=answer,
        slot_values=values,
        parse_ok=all(v != UNKNOWN for v in values.values()),
    )


# Built-in prompt presets covering the three steering regimes: plain class
# queries, class + higher-level grouping, and free qualitative attributes.

_DIGITS = tuple(str(d) for d in range(10))
_CIFAR = ("airplane", "automobile", "bird", "cat", "deer", "dog", "frog", "horse", "ship", "truck")
_FASHION = (
    "T-shirt/top", "Trouser", "Pullover", "Dress", "Coat",
    "Sandal", "Shirt", "Sneaker", "Bag", "Ankle boot",
)

PRESETS: dict[str, GuidingPrompt] = {
    "mnist-digits": GuidingPrompt(
        "What digit is this? Answer with the structure: This is digit {class}.",
        (SlotSpec("class", _DIGITS),),
    ),
    "mnist-parity": GuidingPrompt(
        "What digit is this? Answer with the structure: This is digit {class} {group}.",
        (SlotSpec("class", _DIGITS), SlotSpec("group", ("even", "odd"))),
    ),
    "cifar10-classes": GuidingPrompt(
        "What is this? Answer with the structure: This is a {class}.",
        (SlotSpec("class", _CIFAR),),
    ),
    "cifar10-kind": GuidingPrompt(
        "What is this? Answer with the structure: This is a {class} {group}.",
        (SlotSpec("class", _CIFAR), SlotSpec("group", ("vehicle", "animal"))),
    ),
    "cifar10-daynight": GuidingPrompt(
        "What time is it? Answer with the structure: It is {group}.",
        (SlotSpec("group", ("Day", "Night")),),
    ),
    "fashion-classes": GuidingPrompt(
        "What clothing item is this? Answer with the structure: This is a {class}.",
        (SlotSpec("class", _FASHION),),
    ),
    "fashion-group": GuidingPrompt(
        "What type of clothing item is this? Answer with the structure: This is a {class} {group}.",
        (
            SlotSpec("class", _FASHION),
            SlotSpec("group", ("tops", "bottoms", "outerwear", "footwear", "accessory")),
        ),
    ),
    "fashion-era": GuidingPrompt(
        "Describe this clothing item with the structure: This is {group}.",
        (SlotSpec("group", ("Modern", "Old-fashioned")),),
    ),
    "agnews-topics": GuidingPrompt(
        "What is this news article about? Answer with the structure: This is about {class}.",
        (SlotSpec("class", ("World", "Sports", "Business", "Science/Technology")),),
    ),
}
