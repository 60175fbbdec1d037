# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os
import tempfile
from collections import OrderedDict

import numpy as np

from casein.errors import DataError


MAGIC = b"#casein-container 1\n"


def atomic_write(path, data):
    """
    Write a file so that readers never observe a partially written file.

    The content is written to a temporary file in the same folder and renamed over the
    destination.

    :param str path: Destination path.
    :param data: ``bytes`` or ``str`` to write. Strings are encoded as UTF-8.

    :raises DataError: If the file can't be written.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    folder = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(folder, exist_ok=True)
        fd, temp_path = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(temp_path, path)
        except BaseException:
            if os.path.exists(temp_path):
                os.remove(temp_path)
            raise
    except OSError as e:
        raise DataError(f"Could not write {path}: {e.strerror or e}") from e


def _format_shape(shape):
    return "x".join(str(dim) for dim in shape) if shape else "-"


def _parse_shape(text):
    return () if text == "-" else tuple(int(dim) for dim in text.split("x"))


class Container:
    """
    Self-describing file made of a text header followed by raw float data.

    The header starts with a magic line and lists ``key = value`` pairs. Pairs whose key
    starts with ``blob.`` describe a named array: its shape and its byte offset in the
    payload. A blank line ends the header. The payload is the concatenation, in header
    order, of every array stored as little-endian 32-bit floats.

    Checkpoints, corpus splits and synthesized spectrograms are all stored this way.
    """

    __slots__ = ("_meta", "_blobs")

    def __init__(self, meta=None, blobs=None):
        """
        :param dict meta: Text key-value pairs. Keys can't contain spaces or ``=`` and
            values can't contain new lines.
        :param dict blobs: Arrays indexed by name.
        """
        self._meta = OrderedDict()
        self._blobs = OrderedDict()
        for key, value in (meta or {}).items():
            self.set_meta(key, value)
        for name, array in (blobs or {}).items():
            self.add_blob(name, array)

    @property
    def meta(self):
        """
        Ordered dictionary of the header's text values.
        """
        return self._meta

    @property
    def blobs(self):
        """
        Ordered dictionary of the float arrays, as ``numpy.float32`` arrays.
        """
        return self._blobs

    def set_meta(self, key, value):
        """
        Set a header value.

        :param str key: Name of the value.
        :param value: Value. Converted with ``str``.
        """
        key = str(key)
        value = str(value)
        if not key or " " in key or "=" in key or key.startswith("blob."):
            raise DataError(f"Invalid header key '{key}'.")
        if "\n" in value:
            raise DataError(f"Header value for '{key}' spans multiple lines.")
        self._meta[key] = value

    def add_blob(self, name, array):
        """
        Add a named array.

        :param str name: Name of the array.
        :param array: Anything ``numpy.asarray`` accepts.
        """
        if not name or " " in name or "=" in name:
            raise DataError(f"Invalid blob name '{name}'.")
        self._blobs[name] = np.array(array, dtype=np.float32)

    def to_bytes(self):
        """
        Serialize the container.

        :returns: The ``bytes`` of the file.
        """
        lines = [f"{key} = {value}" for key, value in self._meta.items()]
        payload = []
        offset = 0
        for name, array in self._blobs.items():
            data = array.astype("<f4").tobytes()
            lines.append(f"blob.{name} = {_format_shape(array.shape)} @ {offset}")
            payload.append(data)
            offset += len(data)
        header = "\n".join(lines) + "\n\n"
        return MAGIC + header.encode("utf-8") + b"".join(payload)

    def save(self, path):
        """
        Write the container to disk atomically.

        :param str path: Destination path.
        """
        atomic_write(path, self.to_bytes())


class ContainerReader:
    """
    Reads containers written by :class:`Container`.
    """

    @classmethod
    def load_from_disk(cls, path):
        """
        Load a container from disk.

        :param str path: Path to the file.

        :returns: A :class:`Container`.

        :raises DataError: If the file can't be read or is not a container.
        """
        try:
            with open(path, "rb") as fh:
                return cls.load_from_data(fh.read(), path)
        except OSError as e:
            raise DataError(f"Could not read {path}: {e.strerror or e}") from e

    @classmethod
    def load_from_data(cls, data, path=None):
        """
        Load a container from an array of bytes.

        :param bytes data: Content of the file.
        :param str path: Path the data was read from. Only used in error messages.

        :returns: A :class:`Container`.
        """
        where = f" ({path})" if path else ""
        if not data.startswith(MAGIC):
            raise DataError(f"File is not a casein container{where}.")

        header_end = data.find(b"\n\n", len(MAGIC) - 1)
        if header_end == -1:
            raise DataError(f"Container header is not terminated{where}.")
        header = data[len(MAGIC) : header_end + 1].decode("utf-8")
        payload = memoryview(data)[header_end + 2 :]

        container = Container()
        for line in header.splitlines():
            if not line:
                continue
            key, sep, value = line.partition(" = ")
            if not sep:
                raise DataError(f"Malformed header line '{line}'{where}.")
            if not key.startswith("blob."):
                container.set_meta(key, value)
                continue
            shape_text, _, offset_text = value.partition(" @ ")
            shape = _parse_shape(shape_text)
            offset = int(offset_text)
            count = int(np.prod(shape)) if shape else 1
            end = offset + 4 * count
            if end > len(payload):
                raise DataError(f"Blob '{key[5:]}' runs past the end of the file{where}.")
            array = np.frombuffer(payload[offset:end], dtype="<f4").reshape(shape)
            container.blobs[key[5:]] = array.astype(np.float32)
        return container
