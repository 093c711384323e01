from __future__ import annotations

import pytest

from edgeplane.brokers import BrokerHub, KafkaStyleBroker, MqttStyleBroker
from edgeplane.errors import BrokerStopped, ValidationError


def collect(sub, n, timeout=1.0):
    out = []
    for _ in range(n):
        message = sub.get(timeout=timeout)
        if message is None:
            break
        out.append(message)
    return out


def test_subscribe_then_publish_delivers():
    broker = MqttStyleBroker("mqtt")
    sub = broker.subscribe("raw")
    broker.publish("raw", b"x")
    [message] = collect(sub, 1)
    assert message.payload == b"x"
    assert message.topic == "raw"


def test_fifo_per_topic():
    broker = MqttStyleBroker("mqtt")
    sub = broker.subscribe("raw")
    broker.publish("raw", b"one")
    broker.publish("raw", b"two")
    payloads = [m.payload for m in collect(sub, 2)]
    assert payloads == [b"one", b"two"]


def test_publish_seq_strictly_increasing_per_topic():
    broker = MqttStyleBroker("mqtt")
    sub = broker.subscribe("t")
    seqs = [broker.publish("t", b"p") for _ in range(5)]
    assert seqs == sorted(seqs) and len(set(seqs)) == 5
    received = [m.publish_seq for m in collect(sub, 5)]
    assert received == seqs


def test_publish_without_subscribers_is_accepted():
    broker = MqttStyleBroker("mqtt")
    assert broker.publish("nobody", b"x") == 1
    sub = broker.subscribe("nobody")
    assert sub.get(timeout=0.05) is None  # no retained history


def test_fanout_to_all_subscribers():
    broker = MqttStyleBroker("mqtt")
    sub_a, sub_b = broker.subscribe("t"), broker.subscribe("t")
    broker.publish("t", b"hello")
    assert collect(sub_a, 1)[0].payload == b"hello"
    assert collect(sub_b, 1)[0].payload == b"hello"


def test_mqtt_history_not_replayed():
    broker = MqttStyleBroker("mqtt")
    broker.publish("t", b"early")
    sub = broker.subscribe("t")
    assert sub.get(timeout=0.05) is None


def test_kafka_late_subscriber_can_replay():
    broker = KafkaStyleBroker()
    broker.publish("t", b"one")
    broker.publish("t", b"two")
    fresh = broker.subscribe("t")
    assert fresh.get(timeout=0.05) is None  # default matches the mqtt contract
    replay = broker.subscribe("t", from_beginning=True)
    assert [m.payload for m in collect(replay, 2)] == [b"one", b"two"]


def test_kafka_retention_bounded():
    broker = KafkaStyleBroker(retention=3)
    for i in range(5):
        broker.publish("t", str(i).encode())
    replay = broker.subscribe("t", from_beginning=True)
    assert [m.payload for m in collect(replay, 5)] == [b"2", b"3", b"4"]


def test_closed_subscription_stops_delivery():
    broker = MqttStyleBroker("mqtt")
    sub = broker.subscribe("t")
    sub.close()
    broker.publish("t", b"late")
    assert sub.get(timeout=0.05) is None


def test_stopped_broker_rejects_operations():
    broker = MqttStyleBroker("mqtt")
    sub = broker.subscribe("t")
    broker.stop()
    with pytest.raises(BrokerStopped):
        broker.publish("t", b"x")
    with pytest.raises(BrokerStopped):
        broker.subscribe("t")
    assert sub.get(timeout=0.05) is None


def test_empty_topic_rejected():
    broker = MqttStyleBroker("mqtt")
    with pytest.raises(ValidationError):
        broker.publish("", b"x")
    with pytest.raises(ValidationError):
        broker.subscribe("")


def test_non_bytes_payload_rejected():
    broker = MqttStyleBroker("mqtt")
    with pytest.raises(ValidationError):
        broker.publish("t", "text")


def test_hub_resolves_kinds():
    hub = BrokerHub()
    sub = hub.subscribe("kafka", "t")
    hub.publish("kafka", "t", b"x")
    assert collect(sub, 1)[0].payload == b"x"
    with pytest.raises(ValidationError):
        hub.broker("amqp")
    hub.stop()
