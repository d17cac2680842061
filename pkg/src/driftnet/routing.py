"""Store-carry-forward routing: buffers, Epidemic, and Spray-and-Wait.

Epidemic offers every buffered message to every connected peer; the
receiver rejects what it already has. Spray-and-Wait caps each message at
L copies: holders with more than one copy keep spraying, holders with a
single copy wait for the destination itself. Direct delivery is always
tried first regardless of protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from random import Random

EPIDEMIC = "epidemic"
SPRAY_AND_WAIT = "spray-and-wait"

QUEUE_FIFO = "fifo"
QUEUE_RANDOM = "random"


@dataclass
class RouterKind:
    kind: str = EPIDEMIC
    copies: int = 6          # L; ignored by Epidemic
    binary: bool = False

    def validate(self, context: str = "router") -> None:
        from .errors import ConfigurationError

        if self.kind not in (EPIDEMIC, SPRAY_AND_WAIT):
            raise ConfigurationError(f"{context}: unknown router kind {self.kind!r}")
        if self.copies < 1:
            raise ConfigurationError(f"{context}: copy budget must be >= 1, got {self.copies}")


@dataclass
class Message:
    id: str
    source: str
    destination: str
    size: int
    created_at: float
    ttl: float
    hops: list[str]
    copies: int = 1

    def clone_for(self, receiver: str, copies: int) -> "Message":
        """The receiver's instance: same identity, extended hop record."""
        return Message(self.id, self.source, self.destination, self.size,
                       self.created_at, self.ttl, self.hops + [receiver], copies)

    @property
    def hopcount(self) -> int:
        return len(self.hops) - 1


@dataclass
class BufferEntry:
    message: Message
    received_at: float


class Buffer:
    """Bounded FIFO message store; at most one entry per message id."""

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self.entries: list[BufferEntry] = []
        self._by_id: dict[str, BufferEntry] = {}
        self.used = 0
        # earliest created_at + ttl over entries; lets expire() skip scans
        self.expiry_horizon = math.inf

    def __len__(self) -> int:
        return len(self.entries)

    def has(self, message_id: str) -> bool:
        return message_id in self._by_id

    def get(self, message_id: str) -> Message | None:
        entry = self._by_id.get(message_id)
        return entry.message if entry else None

    @property
    def free(self) -> int:
        return self.capacity - self.used

    def add(self, message: Message, received_at: float) -> None:
        if message.id in self._by_id:
            raise AssertionError(f"duplicate buffer entry {message.id}")
        if self.used + message.size > self.capacity:
            raise AssertionError(f"buffer overflow storing {message.id}")
        entry = BufferEntry(message, received_at)
        self.entries.append(entry)
        self._by_id[message.id] = entry
        self.used += message.size
        self.expiry_horizon = min(self.expiry_horizon, message.created_at + message.ttl)

    def remove(self, message_id: str) -> Message | None:
        entry = self._by_id.pop(message_id, None)
        if entry is None:
            return None
        self.entries.remove(entry)
        self.used -= entry.message.size
        self.expiry_horizon = min((e.message.created_at + e.message.ttl for e in self.entries),
                                  default=math.inf)
        return entry.message

    def messages(self) -> list[Message]:
        return [e.message for e in self.entries]


ACCEPT = "accept"
REJECT_DUPLICATE = "duplicate"
REJECT_DELIVERED = "already-delivered"
REJECT_TOO_LARGE = "too-large"
REJECT_NO_ROOM = "no-room"


def offer_accept(receiver, message: Message) -> str:
    """Receiver-side admission check, applied at proposal and at completion.

    ``receiver`` needs ``buffer`` and ``delivered_ids``; room is only made
    later, when the message is actually stored.
    """
    if receiver.buffer.has(message.id):
        return REJECT_DUPLICATE
    if message.id in receiver.delivered_ids:
        return REJECT_DELIVERED
    if message.size > receiver.buffer.capacity:
        return REJECT_TOO_LARGE
    return ACCEPT


def make_room(buffer: Buffer, incoming_size: int, protected_ids: frozenset[str] | set[str] = frozenset()) -> list[Message] | None:
    """Drop oldest-received entries until incoming_size fits.

    Entries whose id is in protected_ids (messages this node is currently
    transmitting) are never dropped. Returns the dropped messages, or None
    when enough space cannot be freed.
    """
    if incoming_size > buffer.capacity:
        return None
    droppable = sum(e.message.size for e in buffer.entries if e.message.id not in protected_ids)
    if buffer.free + droppable < incoming_size:
        return None  # only protected entries left to evict: reject the offer
    dropped = []
    while buffer.free < incoming_size:
        victim = next(e for e in buffer.entries  # list is ordered by received_at
                      if e.message.id not in protected_ids)
        buffer.remove(victim.message.id)
        dropped.append(victim.message)
    return dropped


def route_tick(node, peers: list, queue_mode: str = QUEUE_FIFO,
               rng: Random | None = None) -> list[tuple[Message, object]]:
    """Transfer intents for one node this tick, in offer order.

    Returns (message, peer) pairs: direct-to-destination intents first
    (FIFO by receipt), then protocol-dependent replication offers. A node
    already sending returns no intents. Spray-and-Wait only replicates
    messages that still have more than one copy; single-copy holders are in
    the wait phase and may only offer to the destination itself.
    """
    if node.outgoing is not None or not peers:
        return []
    peers = sorted(peers, key=lambda p: p.id)
    peer_by_id = {p.id: p for p in peers}
    queue = node.buffer.messages()
    if queue_mode == QUEUE_RANDOM and rng is not None:
        rng.shuffle(queue)

    intents = []
    rest = []
    for msg in queue:
        peer = peer_by_id.get(msg.destination)
        if peer is not None:
            intents.append((msg, peer))
        else:
            rest.append(msg)

    epidemic = node.router.kind == EPIDEMIC
    for msg in rest:
        if not epidemic and msg.copies <= 1:
            continue
        for peer in peers:
            intents.append((msg, peer))
    return intents


@dataclass
class CompletionResult:
    stored: bool = False
    delivered: bool = False
    rejected: str | None = None
    dropped: list[Message] = field(default_factory=list)


def on_transfer_complete(sender, receiver, snapshot: Message, now: float,
                         source_message: Message | None = None) -> CompletionResult:
    """Apply the effects of a finished transfer.

    The receiver re-evaluates admission; a rejection at this point counts
    as an abort upstream. On acceptance the receiver stores its own copy
    (appending itself to the hop record) unless it is the destination, in
    which case the message is consumed and recorded as delivered. Copy
    accounting: Epidemic senders keep their copy unchanged; vanilla
    Spray-and-Wait hands the receiver a single copy and decrements the
    sender; binary mode splits the budget floor/ceil. When source_message
    is given, the sender-side update only applies to that exact instance:
    a copy dropped mid-flight and re-received from elsewhere is a separate
    budget claim and must not be overwritten.
    """
    verdict = offer_accept(receiver, snapshot)
    if verdict != ACCEPT:
        return CompletionResult(rejected=verdict)

    spray = sender.router.kind == SPRAY_AND_WAIT
    if spray and sender.router.binary:
        receiver_copies = max(1, snapshot.copies // 2)
        sender_copies = max(1, math.ceil(snapshot.copies / 2))
    elif spray:
        receiver_copies = 1
        sender_copies = max(1, snapshot.copies - 1)
    else:
        receiver_copies = 1
        sender_copies = snapshot.copies

    held = sender.buffer.get(snapshot.id)
    if held is not None and (source_message is None or held is source_message):
        held.copies = sender_copies

    incoming = snapshot.clone_for(receiver.id, receiver_copies)
    if incoming.destination == receiver.id:
        receiver.delivered_ids.add(incoming.id)
        return CompletionResult(delivered=True)

    protected = {receiver.outgoing.message.id} if receiver.outgoing is not None else set()
    dropped = make_room(receiver.buffer, incoming.size, protected)
    if dropped is None:
        return CompletionResult(rejected=REJECT_NO_ROOM)
    receiver.buffer.add(incoming, now)
    return CompletionResult(stored=True, dropped=dropped)


def expire(node, now: float) -> list[Message]:
    """Remove every buffered message older than its TTL (strictly)."""
    if now <= node.buffer.expiry_horizon:
        return []
    doomed = [m for m in node.buffer.messages() if now - m.created_at > m.ttl]
    for msg in doomed:
        node.buffer.remove(msg.id)
    return doomed
