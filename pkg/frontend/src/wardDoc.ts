/**
 * Ward knowledge documents are the exchange format of /wards/{id}. The ward
 * editor only touches room lines; everything else (categories, treatments,
 * diagnoses, comments) passes through verbatim.
 */

export interface RoomSpec {
  room_id: string;
  capacity: number;
  category: string;
}

export interface WardDocument {
  rooms: RoomSpec[];
  categories: string[];
  /** all lines except room lines, in original order */
  otherLines: string[];
  /** index in otherLines after which room lines are re-inserted */
  roomAnchor: number;
}

const ROOM_RE = /^room\s+(\S+)\s+capacity=(\d+)\s+category=(\S+)\s*$/;
const CATEGORIES_RE = /^categories:\s*(.+)$/;

export function parseWardDocument(text: string): WardDocument {
  const rooms: RoomSpec[] = [];
  const categories: string[] = [];
  const otherLines: string[] = [];
  let roomAnchor = -1;
  for (const line of text.split('\n')) {
    const body = line.split('#', 1)[0].trim();
    const roomMatch = body.match(ROOM_RE);
    if (roomMatch) {
      rooms.push({
        room_id: roomMatch[1],
        capacity: parseInt(roomMatch[2], 10),
        category: roomMatch[3],
      });
      roomAnchor = otherLines.length - 1;
      continue;
    }
    const catMatch = body.match(CATEGORIES_RE);
    if (catMatch) {
      for (const item of catMatch[1].split(',')) {
        categories.push(item.split('=')[0].trim());
      }
    }
    otherLines.push(line);
  }
  if (roomAnchor < 0) {
    // no rooms yet: insert after the categories line
    roomAnchor = otherLines.findIndex((l) => CATEGORIES_RE.test(l.trim()));
  }
  return { rooms, categories, otherLines, roomAnchor };
}

export function serializeWardDocument(doc: WardDocument): string {
  const roomLines = doc.rooms.map(
    (r) => `room ${r.room_id} capacity=${r.capacity} category=${r.category}`,
  );
  const out = [...doc.otherLines];
  out.splice(doc.roomAnchor + 1, 0, ...roomLines);
  return out.join('\n');
}

export function upsertRoom(doc: WardDocument, room: RoomSpec): WardDocument {
  const rooms = doc.rooms.some((r) => r.room_id === room.room_id)
    ? doc.rooms.map((r) => (r.room_id === room.room_id ? room : r))
    : [...doc.rooms, room];
  return { ...doc, rooms };
}

export function removeRoom(doc: WardDocument, roomId: string): WardDocument {
  return { ...doc, rooms: doc.rooms.filter((r) => r.room_id !== roomId) };
}
