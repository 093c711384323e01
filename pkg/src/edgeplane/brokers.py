"""In-process publish/subscribe brokers.

Two broker flavors live side by side: an MQTT-style broker that delivers only
messages published after subscription time, and a Kafka-style broker that
additionally retains a bounded in-memory log per topic so late subscribers
can replay history. Delivery in-process is exactly-once: a publish pushes the
message synchronously into every current subscriber's queue.

Payloads are opaque byte sequences and pass through untouched.
"""

from __future__ import annotations

import queue
import threading
from collections import deque
from dataclasses import dataclass

from .errors import BrokerStopped, ValidationError

BROKER_KINDS = ("mqtt", "kafka")

_CLOSE = object()


@dataclass(frozen=True)
class Message:
    topic: str
    payload: bytes
    publish_seq: int


class Subscription:
    """Ordered stream of messages for one (broker, topic) pair.

    A message counts as pending from the moment it is published until the
    consumer acknowledges it with :meth:`task_done`, so quiescence checks see
    messages that are dequeued but still being processed.
    """

    def __init__(self, broker: "_Broker", topic: str):
        self._broker = broker
        self.topic = topic
        self._queue: queue.Queue = queue.Queue()
        self._pending_lock = threading.Lock()
        self._pending = 0
        self.closed = False

    def _push(self, message: Message) -> None:
        with self._pending_lock:
            self._pending += 1
        self._queue.put(message)

    def get(self, timeout: float | None = None):
        """Next message, or None once closed and drained (or on timeout)."""
        try:
            item = self._queue.get(timeout=timeout)
        except queue.Empty:
            return None
        if item is _CLOSE:
            return None
        return item

    def task_done(self) -> None:
        with self._pending_lock:
            self._pending -= 1

    def __iter__(self):
        while True:
            item = self._queue.get()
            if item is _CLOSE:
                return
            yield item
            self.task_done()

    def pending(self) -> int:
        return max(self._pending, 0)

    def close(self) -> None:
        if self.closed:
            return
        self.closed = True
        self._broker._detach(self)
        self._queue.put(_CLOSE)


class _Broker:
    def __init__(self, kind: str):
        self.kind = kind
        self._lock = threading.Lock()
        self._seq: dict[str, int] = {}
        self._subs: dict[str, list[Subscription]] = {}
        self._stopped = False

    def _check_topic(self, topic: str) -> None:
        if not topic:
            raise ValidationError("topic must be non-empty")
        if self._stopped:
            raise BrokerStopped(f"{self.kind} broker is stopped")

    def publish(self, topic: str, payload: bytes) -> int:
        if isinstance(payload, (bytearray, memoryview)):
            payload = bytes(payload)
        if not isinstance(payload, bytes):
            raise ValidationError("payload must be a byte sequence")
        with self._lock:
            self._check_topic(topic)
            seq = self._seq.get(topic, 0) + 1
            self._seq[topic] = seq
            message = Message(topic=topic, payload=payload, publish_seq=seq)
            self._retain(topic, message)
            for sub in self._subs.get(topic, ()):
                sub._push(message)
        return seq

    def _retain(self, topic: str, message: Message) -> None:
        pass

    def subscribe(self, topic: str) -> Subscription:
        with self._lock:
            self._check_topic(topic)
            sub = Subscription(self, topic)
            self._subs.setdefault(topic, []).append(sub)
        return sub

    def _detach(self, sub: Subscription) -> None:
        with self._lock:
            subs = self._subs.get(sub.topic, [])
            if sub in subs:
                subs.remove(sub)

    def stop(self) -> None:
        with self._lock:
            if self._stopped:
                return
            self._stopped = True
            subs = [s for topic_subs in self._subs.values() for s in topic_subs]
            self._subs.clear()
        for sub in subs:
            sub.closed = True
            sub._queue.put(_CLOSE)


class MqttStyleBroker(_Broker):
    """No retained history: a subscriber sees only what is published after
    it subscribes."""


class KafkaStyleBroker(_Broker):
    """Retains a bounded per-topic log so late subscribers may replay."""

    def __init__(self, kind: str = "kafka", retention: int = 10_000):
        super().__init__(kind)
        self._retention = retention
        self._log: dict[str, deque] = {}

    def _retain(self, topic: str, message: Message) -> None:
        self._log.setdefault(topic, deque(maxlen=self._retention)).append(message)

    def subscribe(self, topic: str, from_beginning: bool = False) -> Subscription:
        with self._lock:
            self._check_topic(topic)
            sub = Subscription(self, topic)
            if from_beginning:
                for message in self._log.get(topic, ()):
                    sub._push(message)
            self._subs.setdefault(topic, []).append(sub)
        return sub


class BrokerHub:
    """The process-wide pair of brokers, addressable by kind."""

    def __init__(self, kafka_retention: int = 10_000):
        self._brokers: dict[str, _Broker] = {
            "mqtt": MqttStyleBroker("mqtt"),
            "kafka": KafkaStyleBroker("kafka", retention=kafka_retention),
        }

    def broker(self, kind: str) -> _Broker:
        try:
            return self._brokers[kind]
        except KeyError:
            raise ValidationError(f"unknown broker kind {kind!r} (expected one of {BROKER_KINDS})")

    def publish(self, kind: str, topic: str, payload: bytes) -> int:
        return self.broker(kind).publish(topic, payload)

    def subscribe(self, kind: str, topic: str, **kwargs) -> Subscription:
        return self.broker(kind).subscribe(topic, **kwargs)

    def stop(self) -> None:
        for broker in self._brokers.values():
            broker.stop()
